use std::collections::{BTreeSet, HashMap};

use super::{Action, AtomicProcess, ChannelName, Configuration, Direction, NameSupply, Payload};

/// Every `(action, successor)` pair of a configuration.
pub type Successors = BTreeSet<(Action, Configuration)>;

/// One step of the configuration, closed under the object, forwarding,
/// frame and communication rules.
///
/// Receptions of channels are only enumerated for channels that some process
/// in the configuration is about to send; [`step_probing`] adds more.
pub fn step(cfg: &Configuration) -> Successors {
    step_probing(cfg, &[])
}

/// [`step`] with extra channel payloads offered to every receiver.
pub fn step_probing(cfg: &Configuration, inputs: &[ChannelName]) -> Successors {
    let names = cfg.channels();
    let procs = cfg.procs();

    let mut local: Vec<(usize, Action, Vec<AtomicProcess>)> = Vec::new();
    for (i, p) in procs.iter().enumerate() {
        if let AtomicProcess::Proc { provider, obj } = p {
            let mut supply = NameSupply::above(&names);
            for (act, res) in obj
                .language()
                .transitions(obj.body(), *provider, &mut supply)
            {
                local.push((i, act, res));
            }
        }
    }

    let mut probes: BTreeSet<ChannelName> = inputs.iter().copied().collect();
    for (_, act, _) in &local {
        if let Action::Labelled {
            dir: Direction::Send,
            payload: Payload::Chan(c),
            ..
        } = act
        {
            probes.insert(*c);
        }
    }
    for (i, p) in procs.iter().enumerate() {
        if let AtomicProcess::Proc { provider, obj } = p {
            for c in &probes {
                for (act, res) in obj.language().accept(obj.body(), *provider, *c) {
                    local.push((i, act, res));
                }
            }
        }
    }

    let mut out = Successors::new();

    // object steps, framed
    for (i, act, res) in &local {
        out.insert((*act, cfg.replace(&[*i], res.clone())));
    }

    // forwarding: proc(a, P), fwd(b, a) steps to proc(b, P)
    let by_provider: HashMap<ChannelName, usize> = procs
        .iter()
        .enumerate()
        .map(|(i, p)| (p.provider(), i))
        .collect();
    for (j, p) in procs.iter().enumerate() {
        if let AtomicProcess::Fwd {
            provider: b,
            target: a,
        } = p
        {
            if let Some(&i) = by_provider.get(a) {
                if let AtomicProcess::Proc { obj, .. } = &procs[i] {
                    let moved = AtomicProcess::proc(*b, obj.clone());
                    out.insert((Action::Silent, cfg.replace(&[i, j], vec![moved])));
                }
            }
        }
    }

    // communication between two distinct processes
    for (i, send, rs) in &local {
        if !matches!(
            send,
            Action::Labelled {
                dir: Direction::Send,
                ..
            }
        ) {
            continue;
        }
        let want = send.complement();
        for (j, recv, rr) in &local {
            if i == j || Some(*recv) != want {
                continue;
            }
            let mut res = rs.clone();
            res.extend(rr.iter().cloned());
            out.insert((Action::Silent, cfg.replace(&[*i, *j], res)));
        }
    }

    out
}

/// Successors reached by exactly the action `act`.
pub fn step_with_action(cfg: &Configuration, act: Action) -> BTreeSet<Configuration> {
    let inputs: Vec<ChannelName> = match act {
        Action::Labelled {
            dir: Direction::Receive,
            payload: Payload::Chan(c),
            ..
        } => vec![c],
        _ => Vec::new(),
    };
    step_probing(cfg, &inputs)
        .into_iter()
        .filter(|(a, _)| *a == act)
        .map(|(_, c)| c)
        .collect()
}

/// Configurations reachable by silent steps within a fuel bound.
#[derive(Debug, Clone)]
pub struct SilentClosure {
    states: Vec<Configuration>,
    parent: Vec<Option<usize>>,
    depth: Vec<usize>,
    exhausted: bool,
    found: Option<usize>,
}

impl SilentClosure {
    /// Reachable configurations in breadth-first order; the first one is the
    /// starting configuration.
    pub fn states(&self) -> &[Configuration] {
        &self.states
    }

    /// True when the search stopped at the fuel bound with successors left
    /// unexplored.
    pub fn exhausted(&self) -> bool {
        self.exhausted
    }

    /// Index of the configuration a [`silent_search`] stopped at.
    pub fn found(&self) -> Option<usize> {
        self.found
    }

    pub fn depth_of(&self, idx: usize) -> usize {
        self.depth[idx]
    }

    /// Silent path from the start to `states()[idx]`, both ends included.
    pub fn path_to(&self, idx: usize) -> Vec<Configuration> {
        let mut path = vec![self.states[idx].clone()];
        let mut cur = idx;
        while let Some(p) = self.parent[cur] {
            path.push(self.states[p].clone());
            cur = p;
        }
        path.reverse();
        path
    }

    pub fn position(&self, cfg: &Configuration) -> Option<usize> {
        self.states.iter().position(|c| c == cfg)
    }

    pub fn contains(&self, cfg: &Configuration) -> bool {
        self.position(cfg).is_some()
    }
}

pub fn silent_successors(cfg: &Configuration) -> BTreeSet<Configuration> {
    step(cfg)
        .into_iter()
        .filter(|(a, _)| a.is_silent())
        .map(|(_, c)| c)
        .collect()
}

/// Breadth-first silent closure up to `fuel` steps (reflexive).
pub fn silent_closure(cfg: &Configuration, fuel: usize) -> SilentClosure {
    silent_search(cfg, fuel, |_| false)
}

/// [`silent_closure`] that stops at the first configuration satisfying
/// `goal`, reported by [`SilentClosure::found`].
pub fn silent_search(
    cfg: &Configuration,
    fuel: usize,
    mut goal: impl FnMut(&Configuration) -> bool,
) -> SilentClosure {
    let mut index: HashMap<Configuration, usize> = HashMap::new();
    let mut closure = SilentClosure {
        states: vec![cfg.clone()],
        parent: vec![None],
        depth: vec![0],
        exhausted: false,
        found: None,
    };
    if goal(cfg) {
        closure.found = Some(0);
        return closure;
    }
    index.insert(cfg.clone(), 0);
    let mut frontier = vec![0usize];
    let mut level = 0;
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for &idx in &frontier {
            let here = closure.states[idx].clone();
            for succ in silent_successors(&here) {
                if index.contains_key(&succ) {
                    continue;
                }
                if level == fuel {
                    closure.exhausted = true;
                    break;
                }
                let k = closure.states.len();
                let hit = goal(&succ);
                index.insert(succ.clone(), k);
                closure.states.push(succ);
                closure.parent.push(Some(idx));
                closure.depth.push(level + 1);
                if hit {
                    closure.found = Some(k);
                    return closure;
                }
                next.push(k);
            }
            if closure.exhausted {
                break;
            }
        }
        if closure.exhausted {
            break;
        }
        frontier = next;
        level += 1;
    }
    closure
}

/// Depth-first search for a configuration satisfying `goal` within `fuel`
/// silent steps. Returns the path to the first one found, both ends
/// included. Finds the same configurations as [`silent_search`] but not
/// necessarily by a shortest path.
pub fn silent_reach(
    cfg: &Configuration,
    fuel: usize,
    mut goal: impl FnMut(&Configuration) -> bool,
) -> Option<Vec<Configuration>> {
    // configuration -> most fuel it was explored with
    let mut seen: HashMap<Configuration, usize> = HashMap::new();
    let mut path = vec![cfg.clone()];
    fn go(
        path: &mut Vec<Configuration>,
        fuel: usize,
        seen: &mut HashMap<Configuration, usize>,
        goal: &mut dyn FnMut(&Configuration) -> bool,
    ) -> bool {
        let here = path.last().unwrap().clone();
        if goal(&here) {
            return true;
        }
        if seen.get(&here).is_some_and(|f| *f >= fuel) {
            return false;
        }
        seen.insert(here.clone(), fuel);
        if fuel == 0 {
            return false;
        }
        for succ in silent_successors(&here) {
            path.push(succ);
            if go(path, fuel - 1, seen, goal) {
                return true;
            }
            path.pop();
        }
        false
    }
    go(&mut path, fuel, &mut seen, &mut goal).then_some(path)
}
