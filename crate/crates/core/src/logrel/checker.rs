use std::collections::{BTreeSet, HashMap};

use crate::kernel::{
    alpha_equivalent, silent_successors, step, step_with_action, Action, AtomicProcess,
    ChannelName, Configuration, Direction, NameSupply, NamelessConfiguration, Payload, Selector,
};
use crate::types::SessionType;

use super::peers::canonical_inhabitants;
use super::verdict::{Failure, LolliCase, TermWitness, UnknownCause, ValueWitness};
use super::CheckBudget;

/// Result of one clause: the witness plus whether it rests on sampled
/// peers, a definite failure, or an inconclusive search.
#[derive(Debug, Clone)]
pub(crate) enum Outcome<T> {
    Ok { w: T, approx: bool },
    Fail(Failure),
    Unknown(UnknownCause, Option<Failure>),
}

impl<T> Outcome<T> {
    fn prefixed(self, label: &str) -> Outcome<T> {
        let push = |mut f: Failure| {
            f.trail.insert(0, label.to_string());
            f
        };
        match self {
            Outcome::Fail(f) => Outcome::Fail(push(f)),
            Outcome::Unknown(c, f) => Outcome::Unknown(c, f.map(push)),
            ok => ok,
        }
    }
}

/// Accumulates the failed alternatives of an existential search.
#[derive(Default)]
struct Alternatives {
    unknown: Option<UnknownCause>,
    closest: Option<Failure>,
}

impl Alternatives {
    fn fail(&mut self, f: Failure) {
        if self
            .closest
            .as_ref()
            .is_none_or(|c| f.progress() > c.progress())
        {
            self.closest = Some(f);
        }
    }

    fn unknown(&mut self, cause: UnknownCause, f: Option<Failure>) {
        self.unknown.get_or_insert(cause);
        if let Some(f) = f {
            self.fail(f);
        }
    }

    fn record<T>(&mut self, o: Outcome<T>) -> Option<(T, bool)> {
        match o {
            Outcome::Ok { w, approx } => Some((w, approx)),
            Outcome::Fail(f) => {
                self.fail(f);
                None
            }
            Outcome::Unknown(c, f) => {
                self.unknown(c, f);
                None
            }
        }
    }

    fn finish<T>(self, fallback: impl FnOnce() -> Failure) -> Outcome<T> {
        match self.unknown {
            Some(c) => Outcome::Unknown(c, self.closest),
            None => Outcome::Fail(self.closest.unwrap_or_else(fallback)),
        }
    }
}

fn failure(
    ty: &SessionType,
    cfg: &Configuration,
    a: ChannelName,
    detail: impl Into<String>,
) -> Failure {
    Failure {
        trail: Vec::new(),
        ty: ty.clone(),
        config: cfg.clone(),
        provider: a,
        expected: expected(ty, a),
        detail: detail.into(),
    }
}

fn expected(ty: &SessionType, a: ChannelName) -> String {
    match ty {
        SessionType::One => format!("perform {a}!() and terminate"),
        SessionType::Tensor(..) => format!("send a channel on {a}"),
        SessionType::Lolli(..) => format!("receive a channel on {a}"),
        SessionType::With(..) => format!("receive both pi1 and pi2 on {a}"),
        SessionType::Plus(..) => format!("send pi1 or pi2 on {a}"),
    }
}

fn branch(ty: &SessionType, sel: Selector) -> &SessionType {
    match ty {
        SessionType::Plus(l, r) | SessionType::With(l, r) => {
            if sel == Selector::Pi1 {
                l
            } else {
                r
            }
        }
        _ => unreachable!("branch of a non-choice type"),
    }
}

type MemoKey = (NamelessConfiguration, SessionType, ChannelName);

pub(crate) struct Checker<'b> {
    budget: &'b CheckBudget,
    memo: HashMap<MemoKey, Outcome<TermWitness>>,
    peers: HashMap<SessionType, Vec<NamelessConfiguration>>,
}

impl<'b> Checker<'b> {
    pub(crate) fn new(budget: &'b CheckBudget) -> Self {
        Checker {
            budget,
            memo: HashMap::new(),
            peers: HashMap::new(),
        }
    }

    /// The name a nameless configuration is instantiated at: `pref` when it
    /// is free in the ambient, otherwise the least name above everything it
    /// mentions.
    pub(crate) fn provider_for(
        w: &NamelessConfiguration,
        pref: Option<ChannelName>,
    ) -> ChannelName {
        match pref {
            Some(a) if w.ambient.provider_of(a).is_none() => a,
            _ => NameSupply::above(&w.channels()).next_name(),
        }
    }

    /// `w ∈ T⟦ty⟧`: some silent descendant of `w[a]` is in `V⟦ty⟧`.
    pub(crate) fn term(
        &mut self,
        w: &NamelessConfiguration,
        ty: &SessionType,
        pref: Option<ChannelName>,
    ) -> Outcome<TermWitness> {
        let a = Self::provider_for(w, pref);
        let key = (w.clone(), ty.clone(), a);
        if let Some(o) = self.memo.get(&key) {
            return o.clone();
        }
        let o = self.term_uncached(w, ty, a);
        self.memo.insert(key, o.clone());
        o
    }

    /// Depth-first over silent descendants within the fuel, checking each
    /// configuration once on first visit. A configuration is expanded again
    /// only when reached with more fuel left than before.
    fn term_uncached(
        &mut self,
        w: &NamelessConfiguration,
        ty: &SessionType,
        a: ChannelName,
    ) -> Outcome<TermWitness> {
        let start = w.instantiate(a).expect("provider chosen free");
        let fuel = self.budget.silent_fuel;
        // most fuel each configuration was expanded with
        let mut expanded: HashMap<Configuration, usize> = HashMap::new();
        let mut checked: BTreeSet<Configuration> = BTreeSet::new();
        let mut alts = Alternatives::default();
        let mut exhausted = false;
        let mut overflow = false;
        // (configuration, its unexplored successors)
        let mut stack: Vec<(Configuration, Vec<Configuration>)> = Vec::new();
        let mut next = Some(start.clone());
        loop {
            if let Some(s) = next.take() {
                if checked.insert(s.clone()) {
                    if let Some((value, approx)) = alts.record(self.value(&s, a, ty)) {
                        let mut path: Vec<Configuration> =
                            stack.into_iter().map(|(c, _)| c).collect();
                        path.push(s);
                        return Outcome::Ok {
                            w: TermWitness {
                                provider: a,
                                path,
                                value,
                            },
                            approx,
                        };
                    }
                }
                let left = fuel - stack.len();
                if expanded.get(&s).is_some_and(|f| *f >= left) {
                    continue;
                }
                if expanded.len() >= self.budget.state_limit {
                    overflow = true;
                    break;
                }
                expanded.insert(s.clone(), left);
                let succ: Vec<Configuration> = silent_successors(&s).into_iter().rev().collect();
                if left == 0 {
                    exhausted |= !succ.is_empty();
                    continue;
                }
                stack.push((s, succ));
            }
            let Some((_, succ)) = stack.last_mut() else {
                break;
            };
            match succ.pop() {
                Some(c) => next = Some(c),
                None => {
                    stack.pop();
                }
            }
        }
        if overflow {
            alts.unknown(UnknownCause::StateLimitExceeded, None);
        } else if exhausted {
            alts.unknown(UnknownCause::FuelExhausted, None);
        }
        alts.finish(|| failure(ty, &start, a, "no silent descendant is ready"))
    }

    /// `w ∈ V⟦ty⟧`, with a witness whose path is just the instantiation.
    pub(crate) fn value_only(
        &mut self,
        w: &NamelessConfiguration,
        ty: &SessionType,
    ) -> Outcome<TermWitness> {
        let a = Self::provider_for(w, None);
        let s = w.instantiate(a).expect("provider chosen free");
        match self.value(&s, a, ty) {
            Outcome::Ok { w: value, approx } => Outcome::Ok {
                w: TermWitness {
                    provider: a,
                    path: vec![s],
                    value,
                },
                approx,
            },
            Outcome::Fail(f) => Outcome::Fail(f),
            Outcome::Unknown(c, f) => Outcome::Unknown(c, f),
        }
    }

    /// `s ∈ V⟦ty⟧` at provider `a`, where `s` is an instantiated
    /// configuration.
    fn value(
        &mut self,
        s: &Configuration,
        a: ChannelName,
        ty: &SessionType,
    ) -> Outcome<ValueWitness> {
        let Some(w) = NamelessConfiguration::deinstantiate(s, a) else {
            return Outcome::Fail(failure(
                ty,
                s,
                a,
                "the channel is not provided by an object",
            ));
        };
        match ty {
            SessionType::One => {
                let act = Action::send(a, Payload::Close);
                let empty = Configuration::empty();
                if !step_with_action(s, act).contains(&empty) {
                    return Outcome::Fail(failure(
                        ty,
                        s,
                        a,
                        "no close step to the empty configuration",
                    ));
                }
                match self.uniform(&w, s, a, act, &empty, None) {
                    Ok(()) => Outcome::Ok {
                        w: ValueWitness::CloseStep,
                        approx: false,
                    },
                    Err(d) => Outcome::Fail(failure(ty, s, a, d)),
                }
            }
            SessionType::Plus(..) => {
                let mut alts = Alternatives::default();
                for sel in Selector::BOTH {
                    let act = Action::send(a, Payload::Sel(sel));
                    let label = format!("(+).{sel}");
                    for succ in step_with_action(s, act) {
                        let Some((then, approx)) =
                            self.continuation(&succ, a, branch(ty, sel), &label, &mut alts)
                        else {
                            continue;
                        };
                        match self.uniform(&w, s, a, act, &succ, None) {
                            Ok(()) => {
                                return Outcome::Ok {
                                    w: ValueWitness::PlusChoice {
                                        which: sel,
                                        then: Box::new(then),
                                    },
                                    approx,
                                }
                            }
                            Err(d) => alts.fail(failure(ty, s, a, d)),
                        }
                    }
                }
                alts.finish(|| failure(ty, s, a, "sends neither selector"))
            }
            SessionType::With(..) => {
                let mut found = Vec::new();
                for sel in Selector::BOTH {
                    let act = Action::receive(a, Payload::Sel(sel));
                    let label = format!("&.{sel}");
                    let mut alts = Alternatives::default();
                    let mut hit = None;
                    for succ in step_with_action(s, act) {
                        if let Some(r) =
                            self.continuation(&succ, a, branch(ty, sel), &label, &mut alts)
                        {
                            if let Err(d) = self.uniform(&w, s, a, act, &succ, None) {
                                alts.fail(failure(ty, s, a, d));
                                continue;
                            }
                            hit = Some(r);
                            break;
                        }
                    }
                    match hit {
                        Some(r) => found.push(r),
                        None => {
                            return alts
                                .finish(|| failure(ty, s, a, format!("does not receive {sel}")))
                        }
                    }
                }
                let (second, a2) = found.pop().expect("two branches");
                let (first, a1) = found.pop().expect("two branches");
                Outcome::Ok {
                    w: ValueWitness::WithBranches {
                        first: Box::new(first),
                        second: Box::new(second),
                    },
                    approx: a1 || a2,
                }
            }
            SessionType::Tensor(l, r) => self.tensor(&w, s, a, ty, l, r),
            SessionType::Lolli(l, r) => self.lolli(&w, s, a, ty, l, r),
        }
    }

    /// After an external step to `succ`, the configuration still providing
    /// `a` must be in `T⟦ty⟧`.
    fn continuation(
        &mut self,
        succ: &Configuration,
        a: ChannelName,
        ty: &SessionType,
        label: &str,
        alts: &mut Alternatives,
    ) -> Option<(TermWitness, bool)> {
        match NamelessConfiguration::deinstantiate(succ, a) {
            None => {
                let mut f = failure(
                    ty,
                    succ,
                    a,
                    "the channel is not provided by an object after the step",
                );
                f.trail.push(label.to_string());
                alts.fail(f);
                None
            }
            Some(w1) => {
                let o = self.term(&w1, ty, Some(a)).prefixed(label);
                alts.record(o)
            }
        }
    }

    fn tensor(
        &mut self,
        w: &NamelessConfiguration,
        s: &Configuration,
        a: ChannelName,
        ty: &SessionType,
        l: &SessionType,
        r: &SessionType,
    ) -> Outcome<ValueWitness> {
        let mut alts = Alternatives::default();
        for (act, succ) in step(s) {
            let Action::Labelled {
                chan,
                dir: Direction::Send,
                payload: Payload::Chan(c),
            } = act
            else {
                continue;
            };
            if chan != a {
                continue;
            }
            let procs = succ.procs();
            let is_obj = |p: &AtomicProcess| matches!(p, AtomicProcess::Proc { .. });
            let ic = procs.iter().position(|p| p.provider() == c && is_obj(p));
            let ia = procs.iter().position(|p| p.provider() == a && is_obj(p));
            let (Some(ic), Some(ia)) = (ic, ia) else {
                alts.fail(failure(
                    ty,
                    &succ,
                    a,
                    format!("after sending {c}, {c} and {a} are not both provided by objects"),
                ));
                continue;
            };
            if procs.len() > self.budget.partition_limit {
                alts.unknown(UnknownCause::PartitionLimitExceeded, None);
                continue;
            }
            let others: Vec<usize> = (0..procs.len()).filter(|&i| i != ic && i != ia).collect();
            let heuristic = connected_mask(&succ, ic, ia, &others);
            let masks = std::iter::once(heuristic)
                .chain((0..1u64 << others.len()).filter(|&m| m != heuristic));
            for mask in masks {
                let (mut left, mut right) = (vec![procs[ic].clone()], vec![procs[ia].clone()]);
                for (bit, &i) in others.iter().enumerate() {
                    if mask >> bit & 1 == 1 {
                        left.push(procs[i].clone());
                    } else {
                        right.push(procs[i].clone());
                    }
                }
                let left: Configuration = left.into_iter().collect();
                let right: Configuration = right.into_iter().collect();
                let w1 = NamelessConfiguration::deinstantiate(&left, c).expect("object at c");
                let w2 = NamelessConfiguration::deinstantiate(&right, a).expect("object at a");
                let Some((lw, la)) = alts.record(self.term(&w1, l, Some(c)).prefixed("(*).left"))
                else {
                    continue;
                };
                let Some((rw, ra)) = alts.record(self.term(&w2, r, Some(a)).prefixed("(*).right"))
                else {
                    continue;
                };
                if let Err(d) = self.uniform(w, s, a, act, &succ, None) {
                    alts.fail(failure(ty, s, a, d));
                    continue;
                }
                return Outcome::Ok {
                    w: ValueWitness::TensorSplit {
                        sent: c,
                        residual: succ.clone(),
                        left: Box::new(lw),
                        right: Box::new(rw),
                    },
                    approx: la || ra,
                };
            }
        }
        alts.finish(|| failure(ty, s, a, "sends no channel"))
    }

    fn lolli(
        &mut self,
        w: &NamelessConfiguration,
        s: &Configuration,
        b: ChannelName,
        ty: &SessionType,
        l: &SessionType,
        r: &SessionType,
    ) -> Outcome<ValueWitness> {
        let peers = self
            .peers
            .entry(l.clone())
            .or_insert_with(|| canonical_inhabitants(l, self.budget.lolli_peers))
            .clone();
        let mut cases = Vec::new();
        for peer in peers {
            let mut avoid = s.channels();
            avoid.extend(peer.channels());
            avoid.insert(b);
            let p = NameSupply::above(&avoid).next_name();
            let inst = peer.instantiate(p).expect("fresh peer channel");
            let combined = s.union(&inst).expect("fresh peer channel");
            let act = Action::receive(b, Payload::Chan(p));
            let mut alts = Alternatives::default();
            let mut hit = None;
            for succ in step_with_action(&combined, act) {
                if let Some(res) = self.continuation(&succ, b, r, "-o", &mut alts) {
                    if let Err(d) = self.uniform(w, &combined, b, act, &succ, Some(&inst)) {
                        alts.fail(failure(ty, s, b, d));
                        continue;
                    }
                    hit = Some(res);
                    break;
                }
            }
            match hit {
                Some((then, _)) => cases.push(LolliCase {
                    peer,
                    peer_channel: p,
                    then,
                }),
                None => {
                    return alts.finish(|| {
                        failure(
                            ty,
                            s,
                            b,
                            format!("does not receive {p} provided by peer {peer}"),
                        )
                    })
                }
            }
        }
        Outcome::Ok {
            w: ValueWitness::LolliCases { cases },
            approx: true,
        }
    }

    /// The external step `s --act--> residual` taken at provider `a` must
    /// also be available, up to renaming, when `w` is provided at other
    /// fresh names.
    fn uniform(
        &self,
        w: &NamelessConfiguration,
        s: &Configuration,
        a: ChannelName,
        act: Action,
        residual: &Configuration,
        extra: Option<&Configuration>,
    ) -> Result<(), String> {
        if self.budget.name_samples <= 1 || w.channels().contains(&a) {
            return Ok(());
        }
        let mut avoid = s.channels();
        avoid.extend(residual.channels());
        avoid.insert(a);
        let mut supply = NameSupply::above(&avoid);
        for _ in 1..self.budget.name_samples {
            let n = supply.next_name();
            let swap = move |c: ChannelName| {
                if c == a {
                    n
                } else if c == n {
                    a
                } else {
                    c
                }
            };
            let mut start = w.instantiate(n).map_err(|e| e.to_string())?;
            if let Some(x) = extra {
                start = start.union(x).map_err(|e| e.to_string())?;
            }
            let want = residual.rename(&swap);
            let got = step_with_action(&start, act.rename(&swap));
            let fixed: BTreeSet<ChannelName> = start.channels();
            if !got.contains(&want) && !got.iter().any(|g| alpha_equivalent(&want, g, &fixed)) {
                return Err(format!("the step is not reproduced when provided at {n}"));
            }
        }
        Ok(())
    }
}

/// Bitmask over `others` of the processes reachable from `procs[ic]` by
/// following client channels to their providers, never crossing `ia`.
fn connected_mask(cfg: &Configuration, ic: usize, ia: usize, others: &[usize]) -> u64 {
    let procs = cfg.procs();
    let mut seen = vec![false; procs.len()];
    seen[ic] = true;
    seen[ia] = true;
    let mut stack = vec![ic];
    while let Some(i) = stack.pop() {
        for ch in procs[i].client_channels() {
            if let Some(j) = procs.iter().position(|p| p.provider() == ch) {
                if !seen[j] {
                    seen[j] = true;
                    stack.push(j);
                }
            }
        }
    }
    others
        .iter()
        .enumerate()
        .filter(|(_, &i)| seen[i])
        .fold(0, |m, (bit, _)| m | 1 << bit)
}
