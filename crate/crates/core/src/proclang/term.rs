use std::collections::BTreeSet;
use std::fmt;

use crate::kernel::{ChannelName, Selector};
use crate::types::SessionType;

/// A symbol: a channel name at runtime or a variable in source terms.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Sym {
    Chan(ChannelName),
    Var(String),
}

impl Sym {
    pub fn var(name: &str) -> Sym {
        Sym::Var(name.to_string())
    }

    pub fn as_var(&self) -> Option<&str> {
        match self {
            Sym::Var(x) => Some(x),
            Sym::Chan(_) => None,
        }
    }

    pub fn as_chan(&self) -> Option<ChannelName> {
        match self {
            Sym::Chan(c) => Some(*c),
            Sym::Var(_) => None,
        }
    }
}

impl fmt::Display for Sym {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Sym::Chan(c) => write!(f, "{c}"),
            Sym::Var(x) => f.write_str(x),
        }
    }
}

/// Process terms. Constructors come in right/left pairs per connective:
/// the unqualified form acts on the term's own providing channel, the `On`
/// form acts as a client on the channel `on`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Term {
    /// `fwd(<- s)`
    Fwd(Sym),
    /// `let x:A <- M1; M2`
    Let {
        var: String,
        ty: SessionType,
        bound: Box<Term>,
        body: Box<Term>,
    },
    /// `send()`
    SendClose,
    /// `recv_s(); M`
    RecvClose { on: Sym, then: Box<Term> },
    /// `recv(x => M)`
    RecvChan { var: String, then: Box<Term> },
    /// `send_s(s'); M`
    SendChanOn { on: Sym, chan: Sym, then: Box<Term> },
    /// `send(s); M`
    SendChan { chan: Sym, then: Box<Term> },
    /// `recv_s(x => M)`
    RecvChanOn {
        on: Sym,
        var: String,
        then: Box<Term>,
    },
    /// `recv(pi1 => M1 | pi2 => M2)`
    RecvCase { left: Box<Term>, right: Box<Term> },
    /// `send_s(pi); M`
    SendSelOn {
        on: Sym,
        sel: Selector,
        then: Box<Term>,
    },
    /// `send(pi); M`
    SendSel { sel: Selector, then: Box<Term> },
    /// `recv_s(pi1 => M1 | pi2 => M2)`
    RecvCaseOn {
        on: Sym,
        left: Box<Term>,
        right: Box<Term>,
    },
}

impl Term {
    pub fn fwd(s: Sym) -> Term {
        Term::Fwd(s)
    }

    pub fn let_(var: &str, ty: SessionType, bound: Term, body: Term) -> Term {
        Term::Let {
            var: var.to_string(),
            ty,
            bound: Box::new(bound),
            body: Box::new(body),
        }
    }

    pub fn recv_close(on: Sym, then: Term) -> Term {
        Term::RecvClose {
            on,
            then: Box::new(then),
        }
    }

    pub fn recv_chan(var: &str, then: Term) -> Term {
        Term::RecvChan {
            var: var.to_string(),
            then: Box::new(then),
        }
    }

    pub fn send_chan_on(on: Sym, chan: Sym, then: Term) -> Term {
        Term::SendChanOn {
            on,
            chan,
            then: Box::new(then),
        }
    }

    pub fn send_chan(chan: Sym, then: Term) -> Term {
        Term::SendChan {
            chan,
            then: Box::new(then),
        }
    }

    pub fn recv_chan_on(on: Sym, var: &str, then: Term) -> Term {
        Term::RecvChanOn {
            on,
            var: var.to_string(),
            then: Box::new(then),
        }
    }

    pub fn recv_case(left: Term, right: Term) -> Term {
        Term::RecvCase {
            left: Box::new(left),
            right: Box::new(right),
        }
    }

    pub fn send_sel_on(on: Sym, sel: Selector, then: Term) -> Term {
        Term::SendSelOn {
            on,
            sel,
            then: Box::new(then),
        }
    }

    pub fn send_sel(sel: Selector, then: Term) -> Term {
        Term::SendSel {
            sel,
            then: Box::new(then),
        }
    }

    pub fn recv_case_on(on: Sym, left: Term, right: Term) -> Term {
        Term::RecvCaseOn {
            on,
            left: Box::new(left),
            right: Box::new(right),
        }
    }

    /// Number of constructors.
    pub fn size(&self) -> usize {
        1 + self.subterms().iter().map(|t| t.size()).sum::<usize>()
    }

    pub fn depth(&self) -> usize {
        1 + self.subterms().iter().map(|t| t.depth()).max().unwrap_or(0)
    }

    pub fn subterms(&self) -> Vec<&Term> {
        match self {
            Term::Fwd(_) | Term::SendClose => vec![],
            Term::Let { bound, body, .. } => vec![bound, body],
            Term::RecvClose { then, .. }
            | Term::RecvChan { then, .. }
            | Term::SendChanOn { then, .. }
            | Term::SendChan { then, .. }
            | Term::RecvChanOn { then, .. }
            | Term::SendSelOn { then, .. }
            | Term::SendSel { then, .. } => vec![then],
            Term::RecvCase { left, right } | Term::RecvCaseOn { left, right, .. } => {
                vec![left, right]
            }
        }
    }

    /// Symbols occurring directly in this constructor (not in subterms).
    pub fn head_syms(&self) -> Vec<&Sym> {
        match self {
            Term::Fwd(s) => vec![s],
            Term::RecvClose { on, .. }
            | Term::RecvChanOn { on, .. }
            | Term::SendSelOn { on, .. }
            | Term::RecvCaseOn { on, .. } => vec![on],
            Term::SendChanOn { on, chan, .. } => vec![on, chan],
            Term::SendChan { chan, .. } => vec![chan],
            _ => vec![],
        }
    }

    /// Variable bound by this constructor, if any.
    pub fn binder(&self) -> Option<&str> {
        match self {
            Term::Let { var, .. } | Term::RecvChan { var, .. } | Term::RecvChanOn { var, .. } => {
                Some(var)
            }
            _ => None,
        }
    }

    /// Channel names occurring anywhere in the term.
    pub fn channels(&self) -> BTreeSet<ChannelName> {
        let mut out = BTreeSet::new();
        self.collect_channels(&mut out);
        out
    }

    fn collect_channels(&self, out: &mut BTreeSet<ChannelName>) {
        out.extend(self.head_syms().into_iter().filter_map(Sym::as_chan));
        for t in self.subterms() {
            t.collect_channels(out);
        }
    }

    /// Variables with a free occurrence.
    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free(&self, bound: &mut Vec<String>, out: &mut BTreeSet<String>) {
        for s in self.head_syms() {
            if let Sym::Var(x) = s {
                if !bound.contains(x) {
                    out.insert(x.clone());
                }
            }
        }
        match self {
            Term::Let {
                var,
                bound: m1,
                body,
                ..
            } => {
                m1.collect_free(bound, out);
                bound.push(var.clone());
                body.collect_free(bound, out);
                bound.pop();
            }
            Term::RecvChan { var, then } | Term::RecvChanOn { var, then, .. } => {
                bound.push(var.clone());
                then.collect_free(bound, out);
                bound.pop();
            }
            _ => {
                for t in self.subterms() {
                    t.collect_free(bound, out);
                }
            }
        }
    }

    pub fn is_closed(&self) -> bool {
        self.free_vars().is_empty()
    }

    /// Applies `rho` to every channel symbol.
    pub fn rename_channels(&self, rho: &dyn Fn(ChannelName) -> ChannelName) -> Term {
        self.map_syms(&|s: &Sym| match s {
            Sym::Chan(c) => Sym::Chan(rho(*c)),
            v => v.clone(),
        })
    }

    fn map_syms(&self, f: &dyn Fn(&Sym) -> Sym) -> Term {
        let b = |t: &Term| Box::new(t.map_syms(f));
        match self {
            Term::Fwd(s) => Term::Fwd(f(s)),
            Term::Let {
                var,
                ty,
                bound,
                body,
            } => Term::Let {
                var: var.clone(),
                ty: ty.clone(),
                bound: b(bound),
                body: b(body),
            },
            Term::SendClose => Term::SendClose,
            Term::RecvClose { on, then } => Term::RecvClose {
                on: f(on),
                then: b(then),
            },
            Term::RecvChan { var, then } => Term::RecvChan {
                var: var.clone(),
                then: b(then),
            },
            Term::SendChanOn { on, chan, then } => Term::SendChanOn {
                on: f(on),
                chan: f(chan),
                then: b(then),
            },
            Term::SendChan { chan, then } => Term::SendChan {
                chan: f(chan),
                then: b(then),
            },
            Term::RecvChanOn { on, var, then } => Term::RecvChanOn {
                on: f(on),
                var: var.clone(),
                then: b(then),
            },
            Term::RecvCase { left, right } => Term::RecvCase {
                left: b(left),
                right: b(right),
            },
            Term::SendSelOn { on, sel, then } => Term::SendSelOn {
                on: f(on),
                sel: *sel,
                then: b(then),
            },
            Term::SendSel { sel, then } => Term::SendSel {
                sel: *sel,
                then: b(then),
            },
            Term::RecvCaseOn { on, left, right } => Term::RecvCaseOn {
                on: f(on),
                left: b(left),
                right: b(right),
            },
        }
    }

    /// Whether the printed form is closed off by its own parenthesis, so
    /// that it can stand before a `;` without ambiguity.
    pub(crate) fn self_delimiting(&self) -> bool {
        matches!(
            self,
            Term::Fwd(_)
                | Term::SendClose
                | Term::RecvChan { .. }
                | Term::RecvChanOn { .. }
                | Term::RecvCase { .. }
                | Term::RecvCaseOn { .. }
        )
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Fwd(s) => write!(f, "fwd(<- {s})"),
            Term::Let {
                var,
                ty,
                bound,
                body,
            } => {
                if bound.self_delimiting() {
                    write!(f, "let {var}:{ty} <- {bound}; {body}")
                } else {
                    write!(f, "let {var}:{ty} <- ({bound}); {body}")
                }
            }
            Term::SendClose => f.write_str("send()"),
            Term::RecvClose { on, then } => write!(f, "recv_{on}(); {then}"),
            Term::RecvChan { var, then } => write!(f, "recv({var} => {then})"),
            Term::SendChanOn { on, chan, then } => write!(f, "send_{on}({chan}); {then}"),
            Term::SendChan { chan, then } => write!(f, "send({chan}); {then}"),
            Term::RecvChanOn { on, var, then } => write!(f, "recv_{on}({var} => {then})"),
            Term::RecvCase { left, right } => write!(f, "recv(pi1 => {left} | pi2 => {right})"),
            Term::SendSelOn { on, sel, then } => write!(f, "send_{on}({sel}); {then}"),
            Term::SendSel { sel, then } => write!(f, "send({sel}); {then}"),
            Term::RecvCaseOn { on, left, right } => {
                write!(f, "recv_{on}(pi1 => {left} | pi2 => {right})")
            }
        }
    }
}

pub fn print_term(t: &Term) -> String {
    t.to_string()
}
