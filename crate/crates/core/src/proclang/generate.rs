//! Goal-directed generation of well-typed terms.

use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::kernel::Selector;
use crate::types::{random_type, Connective, SessionType};

use super::{typecheck, Sym, Term, TypingContext};

struct Gen<'r, R: Rng> {
    rng: &'r mut R,
    taken: BTreeSet<String>,
    next: usize,
    /// Largest type introduced by a cut.
    cut_size: usize,
}

impl<R: Rng> Gen<'_, R> {
    fn fresh(&mut self) -> String {
        loop {
            let name = format!("v{}", self.next);
            self.next += 1;
            if self.taken.insert(name.clone()) {
                return name;
            }
        }
    }

    fn pick_sel(&mut self) -> Selector {
        if self.rng.gen_bool(0.5) {
            Selector::Pi1
        } else {
            Selector::Pi2
        }
    }

    /// A term using exactly `ctx` at `goal`, by a fixed strategy: Id when the
    /// context is a single variable of the goal type, then left rules on the
    /// first variable, then right rules. Terminates because the total size of
    /// the types in context plus the goal shrinks at every step.
    fn finish(&mut self, ctx: TypingContext, goal: &SessionType, sel: Option<Selector>) -> Term {
        if ctx.len() == 1 {
            let (x, t) = ctx.iter().next().expect("one entry");
            if t == goal {
                return Term::Fwd(Sym::Var(x.clone()));
            }
        }
        if let Some((x, t)) = ctx.iter().next().map(|(x, t)| (x.clone(), t.clone())) {
            return self.left(ctx, &x, &t, goal, 0, sel);
        }
        self.right(ctx, goal, 0, sel)
    }

    /// Applies the left rule for `x : t`.
    fn left(
        &mut self,
        mut ctx: TypingContext,
        x: &str,
        t: &SessionType,
        goal: &SessionType,
        depth: usize,
        sel: Option<Selector>,
    ) -> Term {
        let on = Sym::Var(x.to_string());
        match t {
            SessionType::One => {
                ctx.remove(x);
                Term::recv_close(on, self.go(ctx, goal, depth, sel))
            }
            SessionType::Tensor(a, b) => {
                let y = self.fresh();
                ctx.insert(x.to_string(), (**b).clone());
                ctx.insert(y.clone(), (**a).clone());
                Term::recv_chan_on(on, &y, self.go(ctx, goal, depth, sel))
            }
            SessionType::With(a, b) => {
                let s = sel.unwrap_or_else(|| self.pick_sel());
                ctx.insert(
                    x.to_string(),
                    if s == Selector::Pi1 {
                        (**a).clone()
                    } else {
                        (**b).clone()
                    },
                );
                Term::send_sel_on(on, s, self.go(ctx, goal, depth, sel))
            }
            SessionType::Plus(a, b) => {
                let mut cl = ctx.clone();
                cl.insert(x.to_string(), (**a).clone());
                ctx.insert(x.to_string(), (**b).clone());
                let l = self.go(cl, goal, depth, sel);
                let r = self.go(ctx, goal, depth, sel);
                Term::recv_case_on(on, l, r)
            }
            SessionType::Lolli(a, b) => {
                // feed x an argument: an existing variable of type a, else a cut
                let arg = ctx
                    .iter()
                    .find(|(y, ty)| y.as_str() != x && *ty == &**a)
                    .map(|(y, _)| y.clone());
                ctx.insert(x.to_string(), (**b).clone());
                match arg {
                    Some(y) => {
                        ctx.remove(&y);
                        Term::send_chan_on(on, Sym::Var(y), self.go(ctx, goal, depth, sel))
                    }
                    None => {
                        let y = self.fresh();
                        let bound = self.go(TypingContext::new(), a, depth, sel);
                        let rest = self.go(ctx, goal, depth, sel);
                        Term::let_(
                            &y,
                            (**a).clone(),
                            bound,
                            Term::send_chan_on(on, Sym::Var(y.clone()), rest),
                        )
                    }
                }
            }
        }
    }

    /// Applies the right rule for `goal`. Only called with a context the
    /// rule can distribute: empty for `1`.
    fn right(
        &mut self,
        mut ctx: TypingContext,
        goal: &SessionType,
        depth: usize,
        sel: Option<Selector>,
    ) -> Term {
        match goal {
            SessionType::One => {
                debug_assert!(ctx.is_empty());
                Term::SendClose
            }
            SessionType::Tensor(a, b) => {
                let existing = ctx
                    .iter()
                    .find(|(_, ty)| *ty == &**a)
                    .map(|(y, _)| y.clone());
                match existing {
                    Some(y) if depth > 0 => {
                        ctx.remove(&y);
                        Term::send_chan(Sym::Var(y), self.go(ctx, b, depth, sel))
                    }
                    _ => {
                        let y = self.fresh();
                        let bound = self.go(TypingContext::new(), a, depth, sel);
                        let rest = self.go(ctx, b, depth, sel);
                        Term::let_(
                            &y,
                            (**a).clone(),
                            bound,
                            Term::send_chan(Sym::Var(y.clone()), rest),
                        )
                    }
                }
            }
            SessionType::Lolli(a, b) => {
                let y = self.fresh();
                ctx.insert(y.clone(), (**a).clone());
                Term::recv_chan(&y, self.go(ctx, b, depth, sel))
            }
            SessionType::With(a, b) => {
                let l = self.go(ctx.clone(), a, depth, sel);
                let r = self.go(ctx, b, depth, sel);
                Term::recv_case(l, r)
            }
            SessionType::Plus(a, b) => {
                let s = sel.unwrap_or_else(|| self.pick_sel());
                let chosen = if s == Selector::Pi1 { a } else { b };
                Term::send_sel(s, self.go(ctx, chosen, depth, sel))
            }
        }
    }

    fn go(
        &mut self,
        ctx: TypingContext,
        goal: &SessionType,
        depth: usize,
        sel: Option<Selector>,
    ) -> Term {
        if depth <= 1 {
            self.finish(ctx, goal, sel)
        } else {
            self.gen(ctx, goal, depth - 1)
        }
    }

    /// A random term using exactly `ctx` at `goal`; falls back to
    /// [`finish`](Self::finish) once `depth` runs out.
    fn gen(&mut self, ctx: TypingContext, goal: &SessionType, depth: usize) -> Term {
        if depth <= 1 {
            return self.finish(ctx, goal, None);
        }
        #[derive(Clone, Copy)]
        enum Move {
            Id,
            Left,
            Right,
            Cut,
        }
        let mut moves = Vec::new();
        if ctx.len() == 1 && ctx.values().next() == Some(goal) {
            moves.push(Move::Id);
        }
        if !ctx.is_empty() {
            moves.extend([Move::Left, Move::Left]);
        }
        if goal != &SessionType::One {
            moves.extend([Move::Right, Move::Right]);
        } else if ctx.is_empty() {
            // the right rule for 1 ends the term
            moves.push(Move::Right);
        }
        moves.push(Move::Cut);
        match *moves.choose(self.rng).expect("cut is always available") {
            Move::Id => self.finish(ctx, goal, None),
            Move::Left => {
                let keys: Vec<String> = ctx.keys().cloned().collect();
                let x = keys.choose(self.rng).expect("non-empty").clone();
                let t = ctx[&x].clone();
                self.left(ctx, &x, &t, goal, depth, None)
            }
            Move::Right => self.right(ctx, goal, depth, None),
            Move::Cut => {
                let ty = random_type(self.rng, self.cut_size, &Connective::ALL);
                // hand a random part of the context to the bound term
                let (mine, rest): (TypingContext, TypingContext) =
                    ctx.into_iter().partition(|_| self.rng.gen_bool(0.5));
                let x = self.fresh();
                let bound = self.gen(mine, &ty, depth - 1);
                let mut rest = rest;
                rest.insert(x.clone(), ty.clone());
                let body = self.gen(rest, goal, depth - 1);
                Term::let_(&x, ty, bound, body)
            }
        }
    }
}

/// A random term with `ctx ⊢ M :: a`, built with generator recursion
/// depth at most `depth` before a deterministic completion.
pub fn generate_open<R: Rng>(
    ctx: &TypingContext,
    a: &SessionType,
    depth: usize,
    rng: &mut R,
) -> Term {
    let mut g = Gen {
        rng,
        taken: ctx.keys().cloned().collect(),
        next: 0,
        cut_size: 3,
    };
    let m = g.gen(ctx.clone(), a, depth.max(1));
    if let Err(e) = typecheck(ctx, &m, a) {
        panic!("generator produced an ill-typed term `{m}` at `{a}`: {e}");
    }
    m
}

/// A random closed term of type `a`, reproducible from `seed`.
pub fn generate_well_typed(a: &SessionType, depth: usize, seed: u64) -> Term {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    generate_open(&TypingContext::new(), a, depth, &mut rng)
}

/// The smallest closed inhabitant: right rules only, always choosing `pi1`,
/// proving `A ⊗ B` by a cut on `A`.
pub fn canonical_term(a: &SessionType) -> Term {
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let mut g = Gen {
        rng: &mut rng,
        taken: BTreeSet::new(),
        next: 0,
        cut_size: 1,
    };
    let m = g.finish(TypingContext::new(), a, Some(Selector::Pi1));
    debug_assert!(typecheck(&TypingContext::new(), &m, a).is_ok());
    m
}

/// A random term, not necessarily well typed, over the given variables and
/// channels. Binders draw from `vars` too, so shadowing occurs.
pub fn random_raw_term<R: Rng>(
    rng: &mut R,
    depth: usize,
    vars: &[&str],
    chans: &[crate::kernel::ChannelName],
) -> Term {
    let sym = |rng: &mut R| -> Sym {
        if !chans.is_empty() && (vars.is_empty() || rng.gen_bool(0.4)) {
            Sym::Chan(chans[rng.gen_range(0..chans.len())])
        } else {
            Sym::Var(vars[rng.gen_range(0..vars.len())].to_string())
        }
    };
    let var = |rng: &mut R| vars[rng.gen_range(0..vars.len())].to_string();
    let sel = |rng: &mut R| {
        if rng.gen_bool(0.5) {
            Selector::Pi1
        } else {
            Selector::Pi2
        }
    };
    let leaf = depth <= 1 || vars.is_empty();
    let pick = if leaf {
        rng.gen_range(0..2)
    } else {
        rng.gen_range(0..12)
    };
    let sub = |rng: &mut R| random_raw_term(rng, depth - 1, vars, chans);
    match pick {
        0 => Term::SendClose,
        1 if vars.is_empty() && chans.is_empty() => Term::SendClose,
        1 => Term::Fwd(sym(rng)),
        2 => {
            let x = var(rng);
            let ty = random_type(rng, 3, &Connective::ALL);
            let (a, b) = (sub(rng), sub(rng));
            Term::let_(&x, ty, a, b)
        }
        3 => {
            let s = sym(rng);
            Term::recv_close(s, sub(rng))
        }
        4 => {
            let x = var(rng);
            Term::recv_chan(&x, sub(rng))
        }
        5 => {
            let (s, t) = (sym(rng), sym(rng));
            Term::send_chan_on(s, t, sub(rng))
        }
        6 => {
            let s = sym(rng);
            Term::send_chan(s, sub(rng))
        }
        7 => {
            let (s, x) = (sym(rng), var(rng));
            Term::recv_chan_on(s, &x, sub(rng))
        }
        8 => {
            let (a, b) = (sub(rng), sub(rng));
            Term::recv_case(a, b)
        }
        9 => {
            let (s, e) = (sym(rng), sel(rng));
            Term::send_sel_on(s, e, sub(rng))
        }
        10 => {
            let e = sel(rng);
            Term::send_sel(e, sub(rng))
        }
        _ => {
            let s = sym(rng);
            let (a, b) = (sub(rng), sub(rng));
            Term::recv_case_on(s, a, b)
        }
    }
}
