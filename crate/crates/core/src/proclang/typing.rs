use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::Serialize;

use crate::kernel::{ChannelName, Selector};
use crate::types::SessionType;

use super::{Sym, Term};

/// Finite map from variables to the sessions they provide.
pub type TypingContext = BTreeMap<String, SessionType>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Rule {
    Cut,
    Id,
    OneRight,
    OneLeft,
    LolliRight,
    LolliLeft,
    TensorRight,
    TensorLeft,
    WithRight,
    WithLeft,
    PlusRight,
    PlusLeft,
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Rule::Cut => "Cut",
            Rule::Id => "Id",
            Rule::OneRight => "1-Right",
            Rule::OneLeft => "1-Left",
            Rule::LolliRight => "-o-Right",
            Rule::LolliLeft => "-o-Left",
            Rule::TensorRight => "(*)-Right",
            Rule::TensorLeft => "(*)-Left",
            Rule::WithRight => "&-Right",
            Rule::WithLeft => "&-Left",
            Rule::PlusRight => "(+)-Right",
            Rule::PlusLeft => "(+)-Left",
        })
    }
}

/// A typing derivation. `context` is the part of the context the node's
/// conclusion uses.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Derivation {
    pub rule: Rule,
    pub context: TypingContext,
    pub ty: SessionType,
    pub premises: Vec<Derivation>,
}

impl Derivation {
    /// Number of rule applications.
    pub fn size(&self) -> usize {
        1 + self.premises.iter().map(Derivation::size).sum::<usize>()
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        self.render_into(0, &mut out);
        out
    }

    fn render_into(&self, indent: usize, out: &mut String) {
        let ctx: Vec<String> = self
            .context
            .iter()
            .map(|(x, t)| format!("{x}:{t}"))
            .collect();
        out.push_str(&format!(
            "{:indent$}{}  {} |- {}\n",
            "",
            self.rule,
            ctx.join(", "),
            self.ty,
            indent = indent
        ));
        for p in &self.premises {
            p.render_into(indent + 2, out);
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum LinearityIssue {
    /// Left over at the end of the derivation or premise that owns it.
    Unused,
    /// Used after it was consumed.
    Reused,
    /// Branches of a case consume different variables.
    BranchesDisagree,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum TypeErrorKind {
    UnboundVar(String),
    LinearityViolation { var: String, issue: LinearityIssue },
    Mismatch { expected: String, found: String },
    ShadowedVar(String),
    ChannelInSource(ChannelName),
}

/// A type error and the path from the root to the offending subterm.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, thiserror::Error)]
pub struct TypeError {
    pub kind: TypeErrorKind,
    pub path: Vec<String>,
}

impl TypeError {
    pub fn path_string(&self) -> String {
        if self.path.is_empty() {
            "<root>".into()
        } else {
            self.path.join(".")
        }
    }
}

impl fmt::Display for TypeError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "at {}: ", self.path_string())?;
        match &self.kind {
            TypeErrorKind::UnboundVar(x) => write!(f, "unbound variable `{x}`"),
            TypeErrorKind::LinearityViolation { var, issue } => match issue {
                LinearityIssue::Unused => write!(f, "linear variable `{var}` is never used"),
                LinearityIssue::Reused => {
                    write!(f, "linear variable `{var}` is used more than once")
                }
                LinearityIssue::BranchesDisagree => {
                    write!(f, "branches disagree on whether `{var}` is used")
                }
            },
            TypeErrorKind::Mismatch { expected, found } => {
                write!(f, "expected {expected}, found {found}")
            }
            TypeErrorKind::ShadowedVar(x) => write!(f, "variable `{x}` is already in scope"),
            TypeErrorKind::ChannelInSource(c) => write!(f, "channel {c} in a source term"),
        }
    }
}

struct Checker {
    path: Vec<String>,
    /// Every variable lexically in scope, consumed or not.
    scope: Vec<String>,
}

impl Checker {
    fn err(&self, kind: TypeErrorKind) -> TypeError {
        TypeError {
            kind,
            path: self.path.clone(),
        }
    }

    fn mismatch(&self, expected: impl Into<String>, found: &SessionType) -> TypeError {
        self.err(TypeErrorKind::Mismatch {
            expected: expected.into(),
            found: format!("`{found}`"),
        })
    }

    fn var<'s>(&self, s: &'s Sym) -> Result<&'s str, TypeError> {
        match s {
            Sym::Var(x) => Ok(x),
            Sym::Chan(c) => Err(self.err(TypeErrorKind::ChannelInSource(*c))),
        }
    }

    /// Type of an available variable; distinguishes reuse from unbound.
    fn lookup(&self, ctx: &TypingContext, x: &str) -> Result<SessionType, TypeError> {
        match ctx.get(x) {
            Some(t) => Ok(t.clone()),
            None if self.scope.iter().any(|y| y == x) => {
                Err(self.err(TypeErrorKind::LinearityViolation {
                    var: x.to_string(),
                    issue: LinearityIssue::Reused,
                }))
            }
            None => Err(self.err(TypeErrorKind::UnboundVar(x.to_string()))),
        }
    }

    fn bind(&self, ctx: &TypingContext, x: &str) -> Result<(), TypeError> {
        if ctx.contains_key(x) || self.scope.iter().any(|y| y == x) {
            return Err(self.err(TypeErrorKind::ShadowedVar(x.to_string())));
        }
        Ok(())
    }

    fn must_consume(&self, out: &TypingContext, x: &str) -> Result<(), TypeError> {
        if out.contains_key(x) {
            return Err(self.err(TypeErrorKind::LinearityViolation {
                var: x.to_string(),
                issue: LinearityIssue::Unused,
            }));
        }
        Ok(())
    }

    fn same_leftovers(&self, a: &TypingContext, b: &TypingContext) -> Result<(), TypeError> {
        let ka: BTreeSet<&String> = a.keys().collect();
        let kb: BTreeSet<&String> = b.keys().collect();
        if let Some(x) = ka.symmetric_difference(&kb).next() {
            return Err(self.err(TypeErrorKind::LinearityViolation {
                var: (*x).clone(),
                issue: LinearityIssue::BranchesDisagree,
            }));
        }
        Ok(())
    }

    fn sub<T>(
        &mut self,
        seg: &str,
        binds: &[&str],
        f: impl FnOnce(&mut Self) -> Result<T, TypeError>,
    ) -> Result<T, TypeError> {
        self.path.push(seg.to_string());
        let n = self.scope.len();
        self.scope.extend(binds.iter().map(|s| s.to_string()));
        let r = f(self);
        self.scope.truncate(n);
        if r.is_ok() {
            self.path.pop();
        }
        r
    }

    /// Checks `m` against `goal` using variables from `ctx`; returns the
    /// derivation and the unused remainder of `ctx`.
    fn check(
        &mut self,
        ctx: TypingContext,
        m: &Term,
        goal: &SessionType,
    ) -> Result<(Derivation, TypingContext), TypeError> {
        let input = ctx.clone();
        let finish = |rule, premises: Vec<Derivation>, out: TypingContext| {
            let used: TypingContext = input
                .iter()
                .filter(|(k, _)| !out.contains_key(*k))
                .map(|(k, v)| (k.clone(), v.clone()))
                .collect();
            Ok((
                Derivation {
                    rule,
                    context: used,
                    ty: goal.clone(),
                    premises,
                },
                out,
            ))
        };
        match m {
            Term::Fwd(s) => {
                let x = self.var(s)?;
                let t = self.lookup(&ctx, x)?;
                if &t != goal {
                    return Err(self.mismatch(format!("`{x}` to provide `{goal}`"), &t));
                }
                let mut out = ctx;
                out.remove(x);
                finish(Rule::Id, vec![], out)
            }
            Term::Let {
                var,
                ty,
                bound,
                body,
            } => {
                let (d1, mid) = self.sub("bound", &[], |c| c.check(ctx, bound, ty))?;
                self.bind(&mid, var)?;
                let mut mid = mid;
                mid.insert(var.clone(), ty.clone());
                let (d2, out) = self.sub("body", &[var], |c| {
                    let r = c.check(mid, body, goal)?;
                    c.must_consume(&r.1, var)?;
                    Ok(r)
                })?;
                finish(Rule::Cut, vec![d1, d2], out)
            }
            Term::SendClose => {
                if goal != &SessionType::One {
                    return Err(self.mismatch("`1` for `send()`", goal));
                }
                finish(Rule::OneRight, vec![], ctx)
            }
            Term::RecvClose { on, then } => {
                let x = self.var(on)?;
                let t = self.lookup(&ctx, x)?;
                if t != SessionType::One {
                    return Err(self.mismatch(format!("`{x}` of type `1`"), &t));
                }
                let mut rest = ctx;
                rest.remove(x);
                let (d, out) = self.sub("then", &[], |c| c.check(rest, then, goal))?;
                finish(Rule::OneLeft, vec![d], out)
            }
            Term::RecvChan { var, then } => {
                let SessionType::Lolli(a, b) = goal else {
                    return Err(self.mismatch("a `-o` type for `recv(x => ..)`", goal));
                };
                self.bind(&ctx, var)?;
                let mut inner = ctx;
                inner.insert(var.clone(), (**a).clone());
                let (d, out) = self.sub("then", &[var], |c| {
                    let r = c.check(inner, then, b)?;
                    c.must_consume(&r.1, var)?;
                    Ok(r)
                })?;
                finish(Rule::LolliRight, vec![d], out)
            }
            Term::SendChanOn { on, chan, then } => {
                let x = self.var(on)?;
                let y = self.var(chan)?;
                let tx = self.lookup(&ctx, x)?;
                let SessionType::Lolli(a, b) = &tx else {
                    return Err(self.mismatch(format!("`{x}` of a `-o` type"), &tx));
                };
                if x == y {
                    return Err(self.err(TypeErrorKind::LinearityViolation {
                        var: x.to_string(),
                        issue: LinearityIssue::Reused,
                    }));
                }
                let ty = self.lookup(&ctx, y)?;
                if ty != **a {
                    return Err(self.mismatch(format!("`{y}` of type `{a}`"), &ty));
                }
                let mut inner = ctx;
                inner.remove(y);
                inner.insert(x.to_string(), (**b).clone());
                let (d, out) = self.sub("then", &[], |c| {
                    let r = c.check(inner, then, goal)?;
                    c.must_consume(&r.1, x)?;
                    Ok(r)
                })?;
                finish(Rule::LolliLeft, vec![d], out)
            }
            Term::SendChan { chan, then } => {
                let SessionType::Tensor(a, b) = goal else {
                    return Err(self.mismatch("a `(*)` type for `send(y); ..`", goal));
                };
                let y = self.var(chan)?;
                let ty = self.lookup(&ctx, y)?;
                if ty != **a {
                    return Err(self.mismatch(format!("`{y}` of type `{a}`"), &ty));
                }
                let mut rest = ctx;
                rest.remove(y);
                let (d, out) = self.sub("then", &[], |c| c.check(rest, then, b))?;
                finish(Rule::TensorRight, vec![d], out)
            }
            Term::RecvChanOn { on, var, then } => {
                let x = self.var(on)?;
                let tx = self.lookup(&ctx, x)?;
                let SessionType::Tensor(a, b) = &tx else {
                    return Err(self.mismatch(format!("`{x}` of a `(*)` type"), &tx));
                };
                self.bind(&ctx, var)?;
                let mut inner = ctx.clone();
                inner.insert(x.to_string(), (**b).clone());
                inner.insert(var.clone(), (**a).clone());
                let (d, out) = self.sub("then", &[var], |c| {
                    let r = c.check(inner, then, goal)?;
                    c.must_consume(&r.1, x)?;
                    c.must_consume(&r.1, var)?;
                    Ok(r)
                })?;
                finish(Rule::TensorLeft, vec![d], out)
            }
            Term::RecvCase { left, right } => {
                let SessionType::With(a, b) = goal else {
                    return Err(self.mismatch("a `&` type for `recv(pi1 => .. | pi2 => ..)`", goal));
                };
                let (d1, o1) = self.sub("pi1", &[], |c| c.check(ctx.clone(), left, a))?;
                let (d2, o2) = self.sub("pi2", &[], |c| c.check(ctx, right, b))?;
                self.same_leftovers(&o1, &o2)?;
                finish(Rule::WithRight, vec![d1, d2], o1)
            }
            Term::SendSelOn { on, sel, then } => {
                let x = self.var(on)?;
                let tx = self.lookup(&ctx, x)?;
                let SessionType::With(a, b) = &tx else {
                    return Err(self.mismatch(format!("`{x}` of a `&` type"), &tx));
                };
                let chosen = if *sel == Selector::Pi1 { a } else { b };
                let mut inner = ctx;
                inner.insert(x.to_string(), (**chosen).clone());
                let (d, out) = self.sub("then", &[], |c| {
                    let r = c.check(inner, then, goal)?;
                    c.must_consume(&r.1, x)?;
                    Ok(r)
                })?;
                finish(Rule::WithLeft, vec![d], out)
            }
            Term::SendSel { sel, then } => {
                let SessionType::Plus(a, b) = goal else {
                    return Err(self.mismatch("a `(+)` type for `send(pi); ..`", goal));
                };
                let chosen = if *sel == Selector::Pi1 { a } else { b };
                let (d, out) = self.sub("then", &[], |c| c.check(ctx, then, chosen))?;
                finish(Rule::PlusRight, vec![d], out)
            }
            Term::RecvCaseOn { on, left, right } => {
                let x = self.var(on)?;
                let tx = self.lookup(&ctx, x)?;
                let SessionType::Plus(a, b) = &tx else {
                    return Err(self.mismatch(format!("`{x}` of a `(+)` type"), &tx));
                };
                let mut cl = ctx.clone();
                cl.insert(x.to_string(), (**a).clone());
                let mut cr = ctx;
                cr.insert(x.to_string(), (**b).clone());
                let (d1, o1) = self.sub("pi1", &[], |c| {
                    let r = c.check(cl, left, goal)?;
                    c.must_consume(&r.1, x)?;
                    Ok(r)
                })?;
                let (d2, o2) = self.sub("pi2", &[], |c| {
                    let r = c.check(cr, right, goal)?;
                    c.must_consume(&r.1, x)?;
                    Ok(r)
                })?;
                self.same_leftovers(&o1, &o2)?;
                finish(Rule::PlusLeft, vec![d1, d2], o1)
            }
        }
    }
}

/// Decides `Γ ⊢ M :: A`. Every variable of `Γ` must be used exactly once.
/// Binders may not reuse a name already in scope.
pub fn typecheck(ctx: &TypingContext, m: &Term, ty: &SessionType) -> Result<Derivation, TypeError> {
    let mut c = Checker {
        path: Vec::new(),
        scope: ctx.keys().cloned().collect(),
    };
    let (d, out) = c.check(ctx.clone(), m, ty)?;
    if let Some(x) = out.keys().next() {
        return Err(c.err(TypeErrorKind::LinearityViolation {
            var: x.clone(),
            issue: LinearityIssue::Unused,
        }));
    }
    Ok(d)
}

/// `typecheck` in the empty context.
pub fn typecheck_closed(m: &Term, ty: &SessionType) -> Result<Derivation, TypeError> {
    typecheck(&TypingContext::new(), m, ty)
}
