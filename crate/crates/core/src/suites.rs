//! Seeded property suites shared by the unit tests, the acceptance target
//! and the `fuzz` command.
//!
//! Every case draws from its own generator, seeded from the suite seed and
//! the case index, so a failing case can be regenerated in isolation and
//! shrunk by lowering its depth.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::automaton::{
    AutomatonObject, AutomatonSpec, BitFlipState, Target, Transition, TransitionKind,
};
use crate::kernel::{
    alpha_equivalent, equivariance_holds, silent_closure, silent_successors, AtomicProcess,
    ChannelName, Configuration, EquivarianceTrial, LangId, NameSupply, NamelessConfiguration,
    NamelessObject, Selector,
};
use crate::logrel::{backwards_closure_check, check_term, replay, CheckBudget, Verdict};
use crate::proclang::{
    adequacy_check, apply_compl, apply_subst, discard_check, extend_compl, ftlr_check,
    generate_open, map_vals, random_raw_term, related_maps, subst_compose_check,
    ComplementaryConfigs, Substitution, Term, TypingContext,
};
use crate::types::{enumerate_types, random_type, Connective, SessionType};

/// Counterexamples kept per report.
const KEEP: usize = 5;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Counterexample {
    pub case: usize,
    pub input: String,
    pub detail: String,
    /// A smaller input failing the same way, when one was found.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub minimized: Option<String>,
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct SuiteReport {
    pub name: String,
    pub seed: u64,
    pub cases: usize,
    pub failures: usize,
    pub counterexamples: Vec<Counterexample>,
    /// Compliant verdicts whose witness was replayed.
    pub replayed: usize,
    pub replay_failures: usize,
    /// Suite-specific tallies.
    pub counters: BTreeMap<String, usize>,
    #[serde(skip)]
    pub elapsed: Duration,
}

impl SuiteReport {
    fn new(name: &str, seed: u64) -> SuiteReport {
        SuiteReport {
            name: name.to_string(),
            seed,
            ..SuiteReport::default()
        }
    }

    pub fn passed(&self) -> bool {
        self.failures == 0 && self.replay_failures == 0
    }

    fn fail(
        &mut self,
        case: usize,
        input: impl Into<String>,
        detail: impl Into<String>,
        minimized: Option<String>,
    ) {
        self.failures += 1;
        if self.counterexamples.len() < KEEP {
            self.counterexamples.push(Counterexample {
                case,
                input: input.into(),
                detail: detail.into(),
                minimized,
            });
        }
    }

    fn count(&mut self, key: &str) {
        *self.counters.entry(key.to_string()).or_default() += 1;
    }

    /// Replays the witness of a Compliant verdict. Returns the replay error.
    fn replay(
        &mut self,
        omega: &NamelessConfiguration,
        ty: &SessionType,
        v: &Verdict,
    ) -> Option<String> {
        let w = v.witness()?;
        self.replayed += 1;
        let err = match replay(omega, ty, w) {
            Err(e) => Some(e.to_string()),
            Ok(()) if !w.matches_shape(ty) => {
                Some(format!("witness shape {} does not match {ty}", w.shape()))
            }
            Ok(()) => None,
        };
        if err.is_some() {
            self.replay_failures += 1;
        }
        err
    }

    fn finish(mut self, start: Instant) -> SuiteReport {
        self.elapsed = start.elapsed();
        self
    }
}

impl std::fmt::Display for SuiteReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "{}: {} cases, {} failures, {} replayed ({} diverged)",
            self.name, self.cases, self.failures, self.replayed, self.replay_failures
        )?;
        for (k, v) in &self.counters {
            write!(f, ", {k} {v}")?;
        }
        for c in &self.counterexamples {
            write!(f, "\n  case {}: {}\n    {}", c.case, c.input, c.detail)?;
            if let Some(m) = &c.minimized {
                write!(f, "\n    minimized: {m}")?;
            }
        }
        Ok(())
    }
}

/// The seed of case `case` in a suite seeded with `seed`.
pub fn case_seed(seed: u64, case: usize) -> u64 {
    let mut z = seed.wrapping_add(
        (case as u64)
            .wrapping_add(1)
            .wrapping_mul(0x9E37_79B9_7F4A_7C15),
    );
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn case_rng(seed: u64, case: usize) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(case_seed(seed, case))
}

fn lone(t: Term) -> NamelessConfiguration {
    NamelessConfiguration::lone(NamelessObject::term(t).expect("generated terms are closed"))
}

// ---------------------------------------------------------------------------
// fundamental theorem and adequacy

/// Largest type size, term depth and variable-type size of the generated
/// corpus.
pub const FTLR_TYPE_SIZE: usize = 5;
pub const FTLR_MAX_DEPTH: usize = 6;
const OPEN_VAR_TYPE_SIZE: usize = 3;

/// A closed case of the fundamental-theorem suite.
#[derive(Debug, Clone)]
pub struct ClosedCase {
    pub ty: SessionType,
    pub depth: usize,
    pub term: Term,
}

/// Case `case` of the closed suite; `depth` overrides the drawn depth.
pub fn closed_case(
    seed: u64,
    case: usize,
    depth: Option<usize>,
    ty: Option<&SessionType>,
) -> ClosedCase {
    let mut rng = case_rng(seed, case);
    let drawn_ty = random_type(&mut rng, FTLR_TYPE_SIZE, &Connective::ALL);
    let drawn_depth = rng.gen_range(1..=FTLR_MAX_DEPTH);
    let ty = ty.cloned().unwrap_or(drawn_ty);
    let depth = depth.unwrap_or(drawn_depth);
    let term = generate_open(&TypingContext::new(), &ty, depth, &mut rng);
    ClosedCase { ty, depth, term }
}

/// Re-runs a failing case at every smaller depth and returns the first
/// input that still fails, if any.
fn shrink_by_depth(depth: usize, regen: impl Fn(usize) -> (String, bool)) -> Option<String> {
    (1..depth)
        .map(&regen)
        .find(|(_, failed)| *failed)
        .map(|(input, _)| input)
}

fn closed_input(c: &ClosedCase) -> String {
    format!("{} :: {} (depth {})", c.term, c.ty, c.depth)
}

fn ftlr_closed_verdict(c: &ClosedCase, budget: &CheckBudget) -> Verdict {
    ftlr_check(
        &TypingContext::new(),
        &c.term,
        &c.ty,
        &ComplementaryConfigs::new(),
        budget,
    )
    .expect("generated terms typecheck")
}

/// Closed generated terms are Compliant at their type.
pub fn ftlr_closed_suite(count: usize, seed: u64, budget: &CheckBudget) -> SuiteReport {
    let start = Instant::now();
    let mut r = SuiteReport::new("ftlr-closed", seed);
    for i in 0..count {
        let c = closed_case(seed, i, None, None);
        r.cases += 1;
        let lolli = c.ty.contains_lolli();
        if lolli {
            r.count("with_lolli");
        }
        let v = ftlr_closed_verdict(&c, budget);
        let omega = lone(c.term.clone());
        if let Some(e) = r.replay(&omega, &c.ty, &v) {
            r.fail(
                i,
                closed_input(&c),
                format!("witness does not replay: {e}"),
                None,
            );
            continue;
        }
        match &v {
            Verdict::Compliant {
                approximate: true, ..
            } => r.count("approximate"),
            Verdict::Compliant { .. } => {}
            Verdict::Unknown { .. } => {
                r.count(if lolli {
                    "unknown"
                } else {
                    "unknown_lolli_free"
                });
            }
            Verdict::NonCompliant { .. } => r.count("non_compliant"),
        }
        if !v.is_compliant() {
            let min = shrink_by_depth(c.depth, |d| {
                let s = closed_case(seed, i, Some(d), Some(&c.ty));
                (
                    closed_input(&s),
                    !ftlr_closed_verdict(&s, budget).is_compliant(),
                )
            });
            r.fail(i, closed_input(&c), v.to_string(), min);
        }
    }
    r.finish(start)
}

/// A well-typed open term together with compliant complements for its
/// context.
#[derive(Debug, Clone)]
pub struct OpenCase {
    pub gamma: TypingContext,
    pub compl: ComplementaryConfigs,
    pub ty: SessionType,
    pub depth: usize,
    pub term: Term,
}

impl OpenCase {
    fn input(&self) -> String {
        let ctx: Vec<String> = self.gamma.iter().map(|(x, a)| format!("{x}:{a}")).collect();
        let compl: Vec<String> = self
            .compl
            .as_map()
            .iter()
            .map(|(x, (w, a))| format!("{x} -> {w} at {a}"))
            .collect();
        format!(
            "{} |- {} :: {} with {} (depth {})",
            ctx.join(", "),
            self.term,
            self.ty,
            compl.join("; "),
            self.depth
        )
    }

    /// The configuration the theorem speaks about, instantiated at `at`.
    fn closed(&self) -> NamelessConfiguration {
        let t = apply_subst(&self.compl.substitution(), &self.term);
        apply_compl(&self.compl, &t).expect("complement channels are distinct")
    }
}

/// Case `case` of the open suite. Context variables get types of size at
/// most 3 and complements are closed generated terms at channels `#1..`.
pub fn open_case<R: Rng>(rng: &mut R, type_size: usize, depth: Option<usize>) -> OpenCase {
    let vars = rng.gen_range(1..=2);
    let mut gamma = TypingContext::new();
    let mut compl = ComplementaryConfigs::new();
    for j in 0..vars {
        let x = format!("x{j}");
        let a = random_type(rng, OPEN_VAR_TYPE_SIZE, &Connective::ALL);
        let d = rng.gen_range(1..=3);
        let provider = generate_open(&TypingContext::new(), &a, d, rng);
        compl =
            extend_compl(&compl, &x, lone(provider), ChannelName(1 + j as u64)).expect("fresh key");
        gamma.insert(x, a);
    }
    let ty = random_type(rng, type_size, &Connective::ALL);
    let drawn = rng.gen_range(1..=FTLR_MAX_DEPTH - 1);
    let depth = depth.unwrap_or(drawn);
    let term = generate_open(&gamma, &ty, depth, rng);
    OpenCase {
        gamma,
        compl,
        ty,
        depth,
        term,
    }
}

/// Open generated terms closed over compliant complements are Compliant.
pub fn ftlr_open_suite(count: usize, seed: u64, budget: &CheckBudget) -> SuiteReport {
    let start = Instant::now();
    let mut r = SuiteReport::new("ftlr-open", seed);
    let run = |c: &OpenCase| ftlr_check(&c.gamma, &c.term, &c.ty, &c.compl, budget);
    for i in 0..count {
        let c = open_case(&mut case_rng(seed, i), FTLR_TYPE_SIZE - 1, None);
        r.cases += 1;
        let v = match run(&c) {
            Ok(v) => v,
            Err(e) => {
                r.fail(i, c.input(), e.to_string(), None);
                continue;
            }
        };
        if let Some(e) = r.replay(&c.closed(), &c.ty, &v) {
            r.fail(i, c.input(), format!("witness does not replay: {e}"), None);
            continue;
        }
        if !v.is_compliant() {
            let min = shrink_by_depth(c.depth, |d| {
                let s = open_case(&mut case_rng(seed, i), FTLR_TYPE_SIZE - 1, Some(d));
                let failed = !run(&s).map(|v| v.is_compliant()).unwrap_or(false);
                (s.input(), failed)
            });
            r.fail(i, c.input(), v.to_string(), min);
        }
    }
    r.finish(start)
}

pub const ADEQUACY_FUEL: usize = 64;

fn adequacy_term(seed: u64, case: usize, depth: Option<usize>) -> (Term, usize) {
    let mut rng = case_rng(seed, case);
    let drawn = rng.gen_range(1..=FTLR_MAX_DEPTH);
    let depth = depth.unwrap_or(drawn);
    (
        generate_open(&TypingContext::new(), &SessionType::One, depth, &mut rng),
        depth,
    )
}

/// Closed terms of type `1` eventually close their channel.
pub fn adequacy_suite(count: usize, seed: u64) -> SuiteReport {
    let start = Instant::now();
    let mut r = SuiteReport::new("adequacy", seed);
    let a = ChannelName(0);
    let holds = |t: &Term| adequacy_check(t, a, ADEQUACY_FUEL).expect("generated terms typecheck");
    for i in 0..count {
        let (t, depth) = adequacy_term(seed, i, None);
        r.cases += 1;
        if !holds(&t) {
            let min = shrink_by_depth(depth, |d| {
                let (s, _) = adequacy_term(seed, i, Some(d));
                (s.to_string(), !holds(&s))
            });
            r.fail(
                i,
                t.to_string(),
                format!("no close within fuel {ADEQUACY_FUEL}"),
                min,
            );
        }
    }
    r.finish(start)
}

// ---------------------------------------------------------------------------
// lemmas

const RAW_VARS: [&str; 3] = ["x", "y", "z"];

fn raw_chans() -> Vec<ChannelName> {
    (0..4).map(ChannelName).collect()
}

/// `{b/x}(σ(M)) = (σ, b/x)(M)` on raw terms.
pub fn subst_compose_suite(count: usize, seed: u64) -> SuiteReport {
    let start = Instant::now();
    let mut r = SuiteReport::new("subst-compose", seed);
    let chans = raw_chans();
    for i in 0..count {
        let mut rng = case_rng(seed, i);
        let depth = rng.gen_range(1..=5);
        let m = random_raw_term(&mut rng, depth, &RAW_VARS, &chans);
        let x = *RAW_VARS.choose(&mut rng).unwrap();
        let mut sigma = Substitution::new();
        for v in RAW_VARS.iter().filter(|v| **v != x) {
            if rng.gen_bool(0.6) {
                sigma.insert(v.to_string(), *chans.choose(&mut rng).unwrap());
            }
        }
        let b = *chans.choose(&mut rng).unwrap();
        r.cases += 1;
        if !subst_compose_check(&m, &sigma, x, b) {
            r.fail(
                i,
                format!("M = {m}, sigma = {sigma:?}, {x} -> {b}"),
                "sides differ",
                None,
            );
        }
    }
    r.finish(start)
}

/// Extra substitution entries never change a well-typed term whose context
/// is covered.
pub fn discard_suite(count: usize, seed: u64) -> SuiteReport {
    let start = Instant::now();
    let mut r = SuiteReport::new("discard", seed);
    const EXTRA: [&str; 6] = ["z", "w", "v0", "v1", "v2", "v3"];
    for i in 0..count {
        let mut rng = case_rng(seed, i);
        let vars = rng.gen_range(0..=2);
        let gamma: TypingContext = (0..vars)
            .map(|j| {
                (
                    format!("x{j}"),
                    random_type(&mut rng, OPEN_VAR_TYPE_SIZE, &Connective::ALL),
                )
            })
            .collect();
        let ty = random_type(&mut rng, 4, &Connective::ALL);
        let depth = rng.gen_range(1..=5);
        let m = generate_open(&gamma, &ty, depth, &mut rng);
        let sigma: Substitution = gamma
            .keys()
            .map(|x| (x.clone(), ChannelName(rng.gen_range(0..8))))
            .collect();
        let mut sigma2 = Substitution::new();
        for x in EXTRA {
            if rng.gen_bool(0.5) {
                sigma2.insert(x.to_string(), ChannelName(rng.gen_range(0..8)));
            }
        }
        r.cases += 1;
        let input = || format!("M = {m} :: {ty}, sigma = {sigma:?}, sigma' = {sigma2:?}");
        match discard_check(&gamma, &m, &ty, &sigma, &sigma2) {
            Ok(true) => {}
            Ok(false) => r.fail(i, input(), "extra entries changed the term", None),
            Err(e) => r.fail(i, input(), e.to_string(), None),
        }
    }
    r.finish(start)
}

/// Follows up to `steps` random silent steps. Returns every configuration
/// visited, the start first.
fn random_walk<R: Rng>(rng: &mut R, start: &Configuration, steps: usize) -> Vec<Configuration> {
    let mut path = vec![start.clone()];
    for _ in 0..steps {
        let succ: Vec<Configuration> = silent_successors(path.last().unwrap())
            .into_iter()
            .collect();
        match succ.choose(rng) {
            Some(c) => path.push(c.clone()),
            None => break,
        }
    }
    path
}

/// Objects with providers at `base..` for framing.
fn random_frame<R: Rng>(rng: &mut R, base: u64) -> Configuration {
    let n = rng.gen_range(1..=2);
    let procs = (0..n)
        .map(|j| {
            let obj = if rng.gen_bool(0.3) {
                NamelessObject::bitflip(*BitFlipState::ALL.choose(rng).unwrap())
            } else {
                let a = random_type(rng, 3, &Connective::ALL);
                let d = rng.gen_range(1..=3);
                NamelessObject::term(generate_open(&TypingContext::new(), &a, d, rng)).unwrap()
            };
            AtomicProcess::proc(ChannelName(base + j), obj)
        })
        .collect();
    Configuration::new(procs).expect("distinct providers")
}

pub const FRAME_MAX_STEPS: usize = 6;
const FRAME_BASE: u64 = 1000;

/// `Ω →* Ω'` implies `Ω ⧺ Ω₀ →* Ω' ⧺ Ω₀` within the same number of steps,
/// comparing up to the names created along the way.
pub fn frame_suite(count: usize, seed: u64) -> SuiteReport {
    let start = Instant::now();
    let mut r = SuiteReport::new("multistep-frame", seed);
    for i in 0..count {
        let mut rng = case_rng(seed, i);
        let depth = rng.gen_range(1..=4);
        let c = open_case(&mut rng, 4, Some(depth));
        let omega = c
            .closed()
            .instantiate(ChannelName(0))
            .expect("fresh provider");
        let steps = rng.gen_range(0..=FRAME_MAX_STEPS);
        let path = random_walk(&mut rng, &omega, steps);
        let taken = path.len() - 1;
        let later = path.last().unwrap();
        let frame = random_frame(&mut rng, FRAME_BASE);
        let framed_start = omega.union(&frame).expect("disjoint providers");
        let framed_target = later.union(&frame).expect("disjoint providers");
        // names live throughout the walk denote the same channel on both
        // sides; others may have been freed and drawn again
        let mut fixed: BTreeSet<ChannelName> = omega
            .channels()
            .into_iter()
            .filter(|c| path.iter().all(|cfg| cfg.channels().contains(c)))
            .collect();
        fixed.extend(frame.channels());
        r.cases += 1;
        if taken > 0 {
            r.count("non_trivial");
        }
        let closure = silent_closure(&framed_start, taken);
        if !closure
            .states()
            .iter()
            .any(|s| alpha_equivalent(s, &framed_target, &fixed))
        {
            r.fail(
                i,
                format!("{omega} ->{taken} {later}, frame {frame}"),
                "framed target not reached",
                None,
            );
        }
    }
    r.finish(start)
}

pub const CLOSURE_MAX_STEPS: usize = 4;

/// Predecessors of compliant configurations are compliant.
pub fn backwards_closure_suite(count: usize, seed: u64, budget: &CheckBudget) -> SuiteReport {
    let start = Instant::now();
    let mut r = SuiteReport::new("backwards-closure", seed);
    for i in 0..count {
        let mut rng = case_rng(seed, i);
        let (earlier, ty) = if rng.gen_bool(0.5) {
            let depth = rng.gen_range(1..=4);
            let c = open_case(&mut rng, 4, Some(depth));
            (c.closed(), c.ty)
        } else {
            let ty = random_type(&mut rng, 4, &Connective::ALL);
            let d = rng.gen_range(1..=FTLR_MAX_DEPTH);
            (
                lone(generate_open(&TypingContext::new(), &ty, d, &mut rng)),
                ty,
            )
        };
        let p = NameSupply::above(&earlier.channels()).next_name();
        let start_cfg = earlier.instantiate(p).expect("fresh provider");
        let steps = rng.gen_range(0..=CLOSURE_MAX_STEPS);
        let later = random_walk(&mut rng, &start_cfg, steps)
            .iter()
            .rev()
            .find_map(|c| NamelessConfiguration::deinstantiate(c, p))
            .expect("the start deinstantiates");
        r.cases += 1;
        if later != earlier {
            r.count("non_trivial");
        }
        match backwards_closure_check(&earlier, &later, &ty, budget) {
            Ok(true) => {
                let v = check_term(&later, &ty, budget);
                if v.is_compliant() {
                    r.count("later_compliant");
                }
                if let Some(e) = r.replay(&later, &ty, &v) {
                    r.fail(
                        i,
                        format!("{later} :: {ty}"),
                        format!("witness does not replay: {e}"),
                        None,
                    );
                }
            }
            Ok(false) => r.fail(
                i,
                format!("{earlier} ->* {later} :: {ty}"),
                "predecessor not compliant",
                None,
            ),
            Err(e) => r.fail(
                i,
                format!("{earlier} ->* {later} :: {ty}"),
                e.to_string(),
                None,
            ),
        }
    }
    r.finish(start)
}

fn random_map<R: Rng>(rng: &mut R, keys: &[&str]) -> BTreeMap<String, u32> {
    let mut m = BTreeMap::new();
    for k in keys {
        if rng.gen_bool(0.5) {
            m.insert(k.to_string(), rng.gen_range(0..10));
        }
    }
    m
}

/// The five consequences of two maps being related, on random maps of small
/// integers.
pub fn related_maps_suite(count: usize, seed: u64) -> SuiteReport {
    let start = Instant::now();
    let mut r = SuiteReport::new("related-maps", seed);
    let keys = ["a", "b", "c", "d"];
    let le = |x: &u32, y: &u32| x <= y;
    let le_slack = |x: &u32, y: &u32| *x <= y + 3;
    for i in 0..count {
        let mut rng = case_rng(seed, i);
        let m1 = random_map(&mut rng, &keys);
        let m2: BTreeMap<String, u32> = if rng.gen_bool(0.7) {
            m1.iter()
                .map(|(k, v)| (k.clone(), v + rng.gen_range(0..3)))
                .collect()
        } else {
            random_map(&mut rng, &keys)
        };
        r.cases += 1;
        let related = related_maps(&m1, &m2, le);
        if related {
            r.count("related");
        }
        let empty: BTreeMap<String, u32> = BTreeMap::new();
        let facts = [
            ("same domain", !related || m1.keys().eq(m2.keys())),
            ("weakening", !related || related_maps(&m1, &m2, le_slack)),
            (
                "empty",
                (!related_maps(&m1, &empty, le) || m1.is_empty())
                    && (!related_maps(&empty, &m2, le) || m2.is_empty()),
            ),
            (
                "map left",
                !related || related_maps(&map_vals(|v| v / 2, &m1), &m2, le),
            ),
            (
                "map right",
                !related || related_maps(&m1, &map_vals(|v| v + 1, &m2), le),
            ),
        ];
        for (name, ok) in facts {
            if !ok {
                r.fail(
                    i,
                    format!("{m1:?} ~ {m2:?}"),
                    format!("fact `{name}` fails"),
                    None,
                );
            }
        }
    }
    r.finish(start)
}

/// All lemma suites with `count` cases each.
pub fn lemma_suites(count: usize, seed: u64, budget: &CheckBudget) -> Vec<SuiteReport> {
    vec![
        subst_compose_suite(count, seed),
        discard_suite(count, seed),
        frame_suite(count, seed),
        backwards_closure_suite(count, seed, budget),
        related_maps_suite(count, seed),
    ]
}

// ---------------------------------------------------------------------------
// equivariance

fn random_renaming<R: Rng>(
    rng: &mut R,
    support: &BTreeSet<ChannelName>,
) -> BTreeMap<ChannelName, ChannelName> {
    let mut used = BTreeSet::new();
    support
        .iter()
        .map(|c| loop {
            let d = ChannelName(rng.gen_range(0..10_000));
            if used.insert(d) {
                break (*c, d);
            }
        })
        .collect()
}

/// A random automaton with at most `max_states` states and at most
/// `per_state` transitions out of each.
pub fn random_spec<R: Rng>(rng: &mut R, max_states: usize, per_state: usize) -> AutomatonSpec {
    let n = rng.gen_range(1..=max_states);
    let options = transition_options(n);
    let mut transitions = Vec::new();
    for s in 0..n {
        for _ in 0..rng.gen_range(0..=per_state) {
            let (kind, to) = *options.choose(rng).unwrap();
            transitions.push(Transition { from: s, kind, to });
        }
    }
    AutomatonSpec::new(state_names(n), 0, transitions).expect("generated spec is valid")
}

fn random_object<R: Rng>(rng: &mut R, lang: LangId) -> NamelessObject {
    match lang {
        LangId::BitFlip => NamelessObject::bitflip(*BitFlipState::ALL.choose(rng).unwrap()),
        LangId::Automaton => {
            let spec = Arc::new(random_spec(rng, 4, 3));
            let state = rng.gen_range(0..spec.states().len());
            AutomatonObject::new(spec, state).unwrap().into_object()
        }
        LangId::SessProc => {
            // closing by substitution can leave variables a close-receive
            // consumed, so redraw until closed
            let chans: Vec<ChannelName> = (0..6).map(ChannelName).collect();
            loop {
                let depth = rng.gen_range(1..=5);
                let raw = random_raw_term(rng, depth, &["x", "y"], &chans);
                let close: Substitution = ["x", "y"]
                    .iter()
                    .map(|v| (v.to_string(), *chans.choose(rng).unwrap()))
                    .collect();
                if let Ok(obj) = NamelessObject::term(apply_subst(&close, &raw)) {
                    break obj;
                }
            }
        }
    }
}

/// Stepping commutes with injective renaming for objects of `lang`.
pub fn equivariance_suite(lang: LangId, count: usize, seed: u64) -> SuiteReport {
    let start = Instant::now();
    let mut r = SuiteReport::new(&format!("equivariance-{lang}"), seed);
    for i in 0..count {
        let mut rng = case_rng(seed, i);
        let obj = random_object(&mut rng, lang);
        let provider = ChannelName(rng.gen_range(0..8));
        let inputs: Vec<ChannelName> = (0..rng.gen_range(0..=2))
            .map(|_| ChannelName(rng.gen_range(0..8)))
            .collect();
        let mut support = obj.channels();
        support.insert(provider);
        support.extend(inputs.iter().copied());
        let rho = random_renaming(&mut rng, &support);
        let trial = EquivarianceTrial {
            obj,
            provider,
            inputs,
            rho,
        };
        r.cases += 1;
        if let Err(e) = equivariance_holds(&trial) {
            r.fail(
                i,
                format!(
                    "{} at {} renamed by {:?}",
                    trial.obj, trial.provider, trial.rho
                ),
                e,
                None,
            );
        }
    }
    r.finish(start)
}

pub fn equivariance_suites(count: usize, seed: u64) -> Vec<SuiteReport> {
    LangId::ALL
        .iter()
        .map(|l| equivariance_suite(*l, count, seed))
        .collect()
}

// ---------------------------------------------------------------------------
// oracle equivalence on the selection fragment

fn state_names(n: usize) -> Vec<String> {
    (0..n).map(|i| format!("S{i}")).collect()
}

/// Every transition one state of an `n`-state automaton can declare.
fn transition_options(n: usize) -> Vec<(TransitionKind, Target)> {
    let targets: Vec<Target> = (0..n)
        .map(Target::State)
        .chain([Target::Terminate])
        .collect();
    let mut out = Vec::new();
    for sel in [Selector::Pi1, Selector::Pi2] {
        for kind in [TransitionKind::RecvSel(sel), TransitionKind::SendSel(sel)] {
            out.extend(targets.iter().map(|t| (kind, *t)));
        }
    }
    out.push((TransitionKind::SendClose, Target::Terminate));
    out
}

/// Sets of at most `k` distinct options, as index lists.
fn small_subsets(options: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    let mut frontier = vec![Vec::new()];
    for _ in 0..k {
        let mut next = Vec::new();
        for s in &frontier {
            let from = s.last().map_or(0, |l| l + 1);
            for o in from..options {
                let mut t: Vec<usize> = s.clone();
                t.push(o);
                next.push(t);
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out
}

/// Calls `visit` on every automaton with at most `max_states` states (the
/// initial one first) and at most `per_state` distinct transitions out of
/// each state.
pub fn for_each_automaton(
    max_states: usize,
    per_state: usize,
    mut visit: impl FnMut(&AutomatonSpec),
) {
    for n in 1..=max_states {
        let options = transition_options(n);
        let subsets = small_subsets(options.len(), per_state);
        let mut digits = vec![0usize; n];
        loop {
            let transitions = digits
                .iter()
                .enumerate()
                .flat_map(|(s, d)| {
                    subsets[*d]
                        .iter()
                        .map(move |o| (s, o))
                        .map(|(s, o)| Transition {
                            from: s,
                            kind: options[*o].0,
                            to: options[*o].1,
                        })
                })
                .collect();
            visit(
                &AutomatonSpec::new(state_names(n), 0, transitions)
                    .expect("enumerated spec is valid"),
            );
            let mut k = 0;
            while k < n {
                digits[k] += 1;
                if digits[k] < subsets.len() {
                    break;
                }
                digits[k] = 0;
                k += 1;
            }
            if k == n {
                break;
            }
        }
    }
}

/// Number of automata [`for_each_automaton`] visits.
pub fn automaton_count(max_states: usize, per_state: usize) -> usize {
    (1..=max_states)
        .map(|n| {
            small_subsets(transition_options(n).len(), per_state)
                .len()
                .pow(n as u32)
        })
        .sum()
}

/// Compliance of an automaton state read directly off its transition table:
/// recursion on the type, following declared transitions only. Automata have
/// no silent steps and never exchange channels, so `⊗` and `⊸` never hold.
pub fn oracle_compliant(spec: &AutomatonSpec, state: usize, ty: &SessionType) -> bool {
    let leads = |kind: TransitionKind, then: &SessionType| {
        spec.transitions_from(state).any(|t| {
            t.kind == kind
                && match t.to {
                    Target::State(s) => oracle_compliant(spec, s, then),
                    Target::Terminate => false,
                }
        })
    };
    match ty {
        SessionType::One => spec
            .transitions_from(state)
            .any(|t| t.kind == TransitionKind::SendClose && t.to == Target::Terminate),
        SessionType::Plus(a, b) => {
            leads(TransitionKind::SendSel(Selector::Pi1), a)
                || leads(TransitionKind::SendSel(Selector::Pi2), b)
        }
        SessionType::With(a, b) => {
            leads(TransitionKind::RecvSel(Selector::Pi1), a)
                && leads(TransitionKind::RecvSel(Selector::Pi2), b)
        }
        SessionType::Tensor(..) | SessionType::Lolli(..) => false,
    }
}

fn oracle_compare(
    r: &mut SuiteReport,
    spec: AutomatonSpec,
    types: &[SessionType],
    budget: &CheckBudget,
) {
    let spec = Arc::new(spec);
    let omega =
        NamelessConfiguration::lone(AutomatonObject::initial(Arc::clone(&spec)).into_object());
    for ty in types {
        let case = r.cases;
        r.cases += 1;
        let v = check_term(&omega, ty, budget);
        let expected = oracle_compliant(&spec, spec.initial(), ty);
        if expected {
            r.count("compliant");
        }
        if let Some(e) = r.replay(&omega, ty, &v) {
            r.fail(
                case,
                format!("{} :: {ty}", spec.to_json()),
                format!("witness does not replay: {e}"),
                None,
            );
        } else if v.is_unknown() || v.is_compliant() != expected {
            r.fail(
                case,
                format!("{} :: {ty}", spec.to_json()),
                format!(
                    "checker says {}, oracle says {}",
                    v.label(),
                    if expected {
                        "compliant"
                    } else {
                        "non-compliant"
                    }
                ),
                None,
            );
        }
    }
}

/// Session types of the selection fragment with at most `max_size` nodes.
pub fn fragment_types(max_size: usize) -> Vec<SessionType> {
    enumerate_types(max_size, &Connective::FRAGMENT)
}

/// Checker against the table oracle on every automaton within the bounds
/// and every fragment type up to `type_size`.
pub fn oracle_exhaustive_suite(
    max_states: usize,
    per_state: usize,
    type_size: usize,
    budget: &CheckBudget,
) -> SuiteReport {
    let start = Instant::now();
    let mut r = SuiteReport::new("oracle-exhaustive", 0);
    let types = fragment_types(type_size);
    for_each_automaton(max_states, per_state, |spec| {
        oracle_compare(&mut r, spec.clone(), &types, budget)
    });
    r.finish(start)
}

/// Checker against the table oracle on `count` random automata.
pub fn oracle_sampled_suite(
    count: usize,
    seed: u64,
    max_states: usize,
    per_state: usize,
    type_size: usize,
    budget: &CheckBudget,
) -> SuiteReport {
    let start = Instant::now();
    let mut r = SuiteReport::new("oracle-sampled", seed);
    let types = fragment_types(type_size);
    for i in 0..count {
        let spec = random_spec(&mut case_rng(seed, i), max_states, per_state);
        oracle_compare(&mut r, spec, &types, budget);
    }
    r.finish(start)
}
