use std::collections::BTreeMap;

use crate::kernel::ChannelName;

use super::{Sym, Term};

/// Assignment of channel names to variables.
pub type Substitution = BTreeMap<String, ChannelName>;

fn lookup(sigma: &Substitution, s: &Sym) -> Sym {
    match s {
        Sym::Var(x) => sigma.get(x).map_or_else(|| s.clone(), |c| Sym::Chan(*c)),
        Sym::Chan(_) => s.clone(),
    }
}

fn without(sigma: &Substitution, x: &str) -> Substitution {
    let mut s = sigma.clone();
    s.remove(x);
    s
}

/// Replaces variables by channels, structurally. Bound variables are
/// removed from `sigma` before descending under their binder; variables
/// without an entry are left in place.
///
/// In `recv_x(); M` the consumed variable `x` is also dropped for `M`, as
/// it cannot occur there in a linear term.
pub fn apply_subst(sigma: &Substitution, m: &Term) -> Term {
    if sigma.is_empty() {
        return m.clone();
    }
    let go = |s: &Substitution, t: &Term| Box::new(apply_subst(s, t));
    match m {
        Term::Let {
            var,
            ty,
            bound,
            body,
        } => Term::Let {
            var: var.clone(),
            ty: ty.clone(),
            bound: go(sigma, bound),
            body: go(&without(sigma, var), body),
        },
        Term::Fwd(s) => Term::Fwd(lookup(sigma, s)),
        Term::SendClose => Term::SendClose,
        Term::RecvClose { on, then } => {
            let rest = match on {
                Sym::Var(x) => without(sigma, x),
                Sym::Chan(_) => sigma.clone(),
            };
            Term::RecvClose {
                on: lookup(sigma, on),
                then: go(&rest, then),
            }
        }
        Term::RecvChan { var, then } => Term::RecvChan {
            var: var.clone(),
            then: go(&without(sigma, var), then),
        },
        Term::SendChanOn { on, chan, then } => Term::SendChanOn {
            on: lookup(sigma, on),
            chan: lookup(sigma, chan),
            then: go(sigma, then),
        },
        Term::SendChan { chan, then } => Term::SendChan {
            chan: lookup(sigma, chan),
            then: go(sigma, then),
        },
        Term::RecvChanOn { on, var, then } => Term::RecvChanOn {
            on: lookup(sigma, on),
            var: var.clone(),
            then: go(&without(sigma, var), then),
        },
        Term::RecvCase { left, right } => Term::RecvCase {
            left: go(sigma, left),
            right: go(sigma, right),
        },
        Term::SendSelOn { on, sel, then } => Term::SendSelOn {
            on: lookup(sigma, on),
            sel: *sel,
            then: go(sigma, then),
        },
        Term::SendSel { sel, then } => Term::SendSel {
            sel: *sel,
            then: go(sigma, then),
        },
        Term::RecvCaseOn { on, left, right } => Term::RecvCaseOn {
            on: lookup(sigma, on),
            left: go(sigma, left),
            right: go(sigma, right),
        },
    }
}

/// `{b/x}` as a one-entry substitution.
pub fn single(x: &str, b: ChannelName) -> Substitution {
    [(x.to_string(), b)].into_iter().collect()
}

/// Whether `{b/x}(σ(M))` equals `(σ, b/x)(M)`. Requires `x ∉ dom(σ)`.
pub fn subst_compose_check(m: &Term, sigma: &Substitution, x: &str, b: ChannelName) -> bool {
    assert!(
        !sigma.contains_key(x),
        "x must not be in the domain of sigma"
    );
    let lhs = apply_subst(&single(x, b), &apply_subst(sigma, m));
    let mut ext = sigma.clone();
    ext.insert(x.to_string(), b);
    lhs == apply_subst(&ext, m)
}
