use std::fmt;

use serde_json::{json, Map, Value};

use crate::kernel::Selector;

/// Name used in spec files for the accepting (process-free) target.
pub const TERMINATE: &str = "TERMINATE";

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum TransitionKind {
    RecvSel(Selector),
    SendSel(Selector),
    SendClose,
}

impl TransitionKind {
    pub fn tag(self) -> &'static str {
        match self {
            TransitionKind::RecvSel(_) => "recv_sel",
            TransitionKind::SendSel(_) => "send_sel",
            TransitionKind::SendClose => "send_close",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Target {
    State(usize),
    Terminate,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Transition {
    pub from: usize,
    pub kind: TransitionKind,
    pub to: Target,
}

/// A finite-state machine exchanging selectors and close signals on its
/// providing channel. States are referred to by index into `states`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct AutomatonSpec {
    states: Vec<String>,
    initial: usize,
    transitions: Vec<Transition>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AutomatonError {
    #[error("{path}: {message}")]
    Spec { path: String, message: String },
    #[error("{path}: unknown state `{state}`")]
    DanglingState { path: String, state: String },
}

fn spec_err(path: impl Into<String>, message: impl Into<String>) -> AutomatonError {
    AutomatonError::Spec {
        path: path.into(),
        message: message.into(),
    }
}

impl AutomatonSpec {
    /// Validates indices and the close-terminates rule.
    pub fn new(
        states: Vec<String>,
        initial: usize,
        transitions: Vec<Transition>,
    ) -> Result<AutomatonSpec, AutomatonError> {
        if states.is_empty() {
            return Err(spec_err("$.states", "at least one state is required"));
        }
        for (i, s) in states.iter().enumerate() {
            if s == TERMINATE {
                return Err(spec_err(
                    format!("$.states[{i}]"),
                    "`TERMINATE` is reserved",
                ));
            }
            if states[..i].contains(s) {
                return Err(spec_err(
                    format!("$.states[{i}]"),
                    format!("duplicate state `{s}`"),
                ));
            }
        }
        if initial >= states.len() {
            return Err(AutomatonError::DanglingState {
                path: "$.initial".into(),
                state: format!("#{initial}"),
            });
        }
        for (i, t) in transitions.iter().enumerate() {
            let dangling = |field: &str, idx: usize| AutomatonError::DanglingState {
                path: format!("$.transitions[{i}].{field}"),
                state: format!("#{idx}"),
            };
            if t.from >= states.len() {
                return Err(dangling("from", t.from));
            }
            match t.to {
                Target::State(s) if s >= states.len() => return Err(dangling("to", s)),
                Target::State(_) if t.kind == TransitionKind::SendClose => {
                    return Err(spec_err(
                        format!("$.transitions[{i}].to"),
                        "send_close must terminate",
                    ))
                }
                _ => {}
            }
        }
        let mut transitions = transitions;
        transitions.sort();
        transitions.dedup();
        Ok(AutomatonSpec {
            states,
            initial,
            transitions,
        })
    }

    pub fn states(&self) -> &[String] {
        &self.states
    }

    pub fn initial(&self) -> usize {
        self.initial
    }

    pub fn transitions(&self) -> &[Transition] {
        &self.transitions
    }

    pub fn state_index(&self, name: &str) -> Option<usize> {
        self.states.iter().position(|s| s == name)
    }

    pub fn state_name(&self, idx: usize) -> &str {
        &self.states[idx]
    }

    pub fn transitions_from(&self, state: usize) -> impl Iterator<Item = &Transition> {
        self.transitions.iter().filter(move |t| t.from == state)
    }

    /// The same machine with one transition removed.
    pub fn without_transition(&self, idx: usize) -> AutomatonSpec {
        let mut ts = self.transitions.clone();
        ts.remove(idx);
        AutomatonSpec::new(self.states.clone(), self.initial, ts).expect("removal keeps validity")
    }

    /// The same machine with one transition replaced.
    pub fn with_transition(
        &self,
        idx: usize,
        t: Transition,
    ) -> Result<AutomatonSpec, AutomatonError> {
        let mut ts = self.transitions.clone();
        ts[idx] = t;
        AutomatonSpec::new(self.states.clone(), self.initial, ts)
    }

    pub fn to_json(&self) -> Value {
        let ts: Vec<Value> = self
            .transitions
            .iter()
            .map(|t| {
                let mut m = Map::new();
                m.insert("from".into(), json!(self.states[t.from]));
                m.insert("kind".into(), json!(t.kind.tag()));
                match t.kind {
                    TransitionKind::RecvSel(s) | TransitionKind::SendSel(s) => {
                        m.insert("sel".into(), json!(s.index()));
                    }
                    TransitionKind::SendClose => {}
                }
                if let Target::State(s) = t.to {
                    m.insert("to".into(), json!(self.states[s]));
                }
                Value::Object(m)
            })
            .collect();
        json!({
            "states": self.states,
            "initial": self.states[self.initial],
            "transitions": ts,
        })
    }

    pub fn from_json(v: &Value) -> Result<AutomatonSpec, AutomatonError> {
        let obj = v
            .as_object()
            .ok_or_else(|| spec_err("$", "expected an object"))?;
        for k in obj.keys() {
            if !matches!(k.as_str(), "states" | "initial" | "transitions") {
                return Err(spec_err(format!("$.{k}"), "unknown field"));
            }
        }
        let states: Vec<String> = obj
            .get("states")
            .ok_or_else(|| spec_err("$.states", "missing field"))?
            .as_array()
            .ok_or_else(|| spec_err("$.states", "expected an array"))?
            .iter()
            .enumerate()
            .map(|(i, s)| {
                s.as_str()
                    .map(str::to_string)
                    .ok_or_else(|| spec_err(format!("$.states[{i}]"), "expected a string"))
            })
            .collect::<Result<_, _>>()?;
        let lookup = |path: String, name: &str| {
            states
                .iter()
                .position(|s| s == name)
                .ok_or_else(|| AutomatonError::DanglingState {
                    path,
                    state: name.to_string(),
                })
        };
        let initial_name = obj
            .get("initial")
            .ok_or_else(|| spec_err("$.initial", "missing field"))?
            .as_str()
            .ok_or_else(|| spec_err("$.initial", "expected a string"))?;
        let initial = lookup("$.initial".into(), initial_name)?;

        let raw = match obj.get("transitions") {
            None => &[][..],
            Some(t) => t
                .as_array()
                .ok_or_else(|| spec_err("$.transitions", "expected an array"))?
                .as_slice(),
        };
        let mut transitions = Vec::with_capacity(raw.len());
        for (i, t) in raw.iter().enumerate() {
            let at = format!("$.transitions[{i}]");
            let t = t
                .as_object()
                .ok_or_else(|| spec_err(&at, "expected an object"))?;
            for k in t.keys() {
                if !matches!(k.as_str(), "from" | "kind" | "sel" | "to") {
                    return Err(spec_err(format!("{at}.{k}"), "unknown field"));
                }
            }
            let str_field = |f: &str| -> Result<Option<&str>, AutomatonError> {
                match t.get(f) {
                    None => Ok(None),
                    Some(v) => v
                        .as_str()
                        .map(Some)
                        .ok_or_else(|| spec_err(format!("{at}.{f}"), "expected a string")),
                }
            };
            let from_name = str_field("from")?
                .ok_or_else(|| spec_err(format!("{at}.from"), "missing field"))?;
            let from = lookup(format!("{at}.from"), from_name)?;
            let kind_tag = str_field("kind")?
                .ok_or_else(|| spec_err(format!("{at}.kind"), "missing field"))?;
            let sel = || -> Result<Selector, AutomatonError> {
                let path = format!("{at}.sel");
                let n = t
                    .get("sel")
                    .ok_or_else(|| spec_err(&path, "missing field"))?
                    .as_u64()
                    .ok_or_else(|| spec_err(&path, "expected 1 or 2"))?;
                Selector::from_index(n).ok_or_else(|| spec_err(&path, "expected 1 or 2"))
            };
            let kind = match kind_tag {
                "recv_sel" => TransitionKind::RecvSel(sel()?),
                "send_sel" => TransitionKind::SendSel(sel()?),
                "send_close" => {
                    if t.contains_key("sel") {
                        return Err(spec_err(
                            format!("{at}.sel"),
                            "send_close carries no selector",
                        ));
                    }
                    TransitionKind::SendClose
                }
                other => {
                    return Err(spec_err(
                        format!("{at}.kind"),
                        format!(
                            "unknown kind `{other}` (expected recv_sel, send_sel or send_close)"
                        ),
                    ))
                }
            };
            let to = match str_field("to")? {
                None | Some(TERMINATE) => Target::Terminate,
                Some(name) => {
                    let idx = lookup(format!("{at}.to"), name)?;
                    if kind == TransitionKind::SendClose {
                        return Err(spec_err(format!("{at}.to"), "send_close must terminate"));
                    }
                    Target::State(idx)
                }
            };
            transitions.push(Transition { from, kind, to });
        }
        AutomatonSpec::new(states, initial, transitions)
    }
}

impl fmt::Display for AutomatonSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_json())
    }
}

/// Parses the JSON schema
/// `{"states": [..], "initial": "S0", "transitions": [{"from", "kind", "sel"?, "to"?}]}`.
pub fn load_automaton(src: &str) -> Result<AutomatonSpec, AutomatonError> {
    let v: Value =
        serde_json::from_str(src).map_err(|e| spec_err("$", format!("invalid JSON: {e}")))?;
    AutomatonSpec::from_json(&v)
}

/// The four-state bit-flipping automaton.
pub fn bitflip_spec() -> AutomatonSpec {
    use Selector::{Pi1, Pi2};
    let t = |from, kind, to| Transition { from, kind, to };
    AutomatonSpec::new(
        ["S0", "S1", "S2", "S3"].map(String::from).to_vec(),
        0,
        vec![
            t(0, TransitionKind::RecvSel(Pi1), Target::State(1)),
            t(0, TransitionKind::RecvSel(Pi2), Target::State(2)),
            t(1, TransitionKind::SendSel(Pi2), Target::State(3)),
            t(2, TransitionKind::SendSel(Pi1), Target::State(3)),
            t(3, TransitionKind::SendClose, Target::Terminate),
        ],
    )
    .expect("well-formed")
}

#[cfg(test)]
mod tests {
    use super::*;

    const BITFLIP: &str = include_str!("../../../../fixtures/bitflip.json");

    #[test]
    fn shipped_fixture_is_the_bitflip_machine() {
        let spec = load_automaton(BITFLIP).unwrap();
        assert_eq!(spec, bitflip_spec());
        assert_eq!(spec.states().len(), 4);
        assert_eq!(spec.transitions().len(), 5);
    }

    #[test]
    fn json_round_trip() {
        let spec = bitflip_spec();
        let back = AutomatonSpec::from_json(&spec.to_json()).unwrap();
        assert_eq!(back, spec);
    }

    #[test]
    fn dangling_state() {
        let src = r#"{"states":["S0"],"initial":"S0","transitions":[{"from":"S0","kind":"recv_sel","sel":1,"to":"S9"}]}"#;
        assert_eq!(
            load_automaton(src).unwrap_err(),
            AutomatonError::DanglingState {
                path: "$.transitions[0].to".into(),
                state: "S9".into()
            }
        );
        let src = r#"{"states":["S0"],"initial":"S1"}"#;
        assert!(matches!(
            load_automaton(src),
            Err(AutomatonError::DanglingState { .. })
        ));
    }

    #[test]
    fn close_must_terminate() {
        let src = r#"{"states":["S0"],"initial":"S0","transitions":[{"from":"S0","kind":"send_close","to":"S0"}]}"#;
        match load_automaton(src).unwrap_err() {
            AutomatonError::Spec { path, .. } => assert_eq!(path, "$.transitions[0].to"),
            e => panic!("unexpected {e:?}"),
        }
        let src = r#"{"states":["S0"],"initial":"S0","transitions":[{"from":"S0","kind":"send_close","to":"TERMINATE"}]}"#;
        assert!(load_automaton(src).is_ok());
    }

    #[test]
    fn schema_violations_report_paths() {
        let cases = [
            ("[]", "$"),
            (r#"{"initial":"S0"}"#, "$.states"),
            (r#"{"states":["S0"]}"#, "$.initial"),
            (r#"{"states":["S0","S0"],"initial":"S0"}"#, "$.states[1]"),
            (
                r#"{"states":["S0"],"initial":"S0","transitions":[{"from":"S0","kind":"recv_sel","sel":3}]}"#,
                "$.transitions[0].sel",
            ),
            (
                r#"{"states":["S0"],"initial":"S0","transitions":[{"from":"S0","kind":"jump"}]}"#,
                "$.transitions[0].kind",
            ),
            (
                r#"{"states":["S0"],"initial":"S0","transitions":[{"from":"S0","kind":"send_sel"}]}"#,
                "$.transitions[0].sel",
            ),
            (r#"{"states":["S0"],"initial":"S0","extra":1}"#, "$.extra"),
            ("{", "$"),
        ];
        for (src, want) in cases {
            match load_automaton(src) {
                Err(AutomatonError::Spec { path, .. }) => assert_eq!(path, want, "{src}"),
                other => panic!("{src}: {other:?}"),
            }
        }
    }
}
