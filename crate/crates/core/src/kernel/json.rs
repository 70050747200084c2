//! Canonical JSON form of configurations.
//!
//! ```text
//! {"procs":[{"proc":{"chan":N,"lang":"...","body":...}} | {"fwd":{"from":N,"to":N}}]}
//! ```

use serde::ser::{SerializeMap, SerializeStruct};
use serde::{Serialize, Serializer};
use serde_json::{json, Value};

use super::registry;
use super::{
    AtomicProcess, ChannelName, Configuration, KernelError, NamelessConfiguration, NamelessObject,
};

impl Serialize for NamelessObject {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("NamelessObject", 2)?;
        st.serialize_field("lang", self.lang().tag())?;
        st.serialize_field("body", &self.language().encode(self.body()))?;
        st.end()
    }
}

impl Serialize for AtomicProcess {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut m = s.serialize_map(Some(1))?;
        match self {
            AtomicProcess::Proc { provider, obj } => {
                let inner = json!({
                    "chan": provider.0,
                    "lang": obj.lang().tag(),
                    "body": obj.language().encode(obj.body()),
                });
                m.serialize_entry("proc", &inner)?;
            }
            AtomicProcess::Fwd { provider, target } => {
                m.serialize_entry("fwd", &json!({"from": provider.0, "to": target.0}))?;
            }
        }
        m.end()
    }
}

impl Serialize for Configuration {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("Configuration", 1)?;
        st.serialize_field("procs", self.procs())?;
        st.end()
    }
}

impl Serialize for NamelessConfiguration {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("NamelessConfiguration", 2)?;
        st.serialize_field("ambient", &self.ambient)?;
        st.serialize_field("head", &self.head)?;
        st.end()
    }
}

fn malformed(msg: impl Into<String>) -> KernelError {
    KernelError::Malformed(msg.into())
}

fn channel_field(
    obj: &serde_json::Map<String, Value>,
    key: &str,
    at: &str,
) -> Result<ChannelName, KernelError> {
    obj.get(key)
        .and_then(Value::as_u64)
        .map(ChannelName)
        .ok_or_else(|| malformed(format!("{at}.{key}: expected a non-negative integer")))
}

impl NamelessObject {
    pub fn from_json_value(lang: &str, body: &Value) -> Result<NamelessObject, KernelError> {
        let language = registry::lookup_tag(lang)?;
        NamelessObject::new(language.decode(body)?)
    }
}

impl AtomicProcess {
    pub fn from_json_value(v: &Value, at: &str) -> Result<AtomicProcess, KernelError> {
        let obj = v.as_object().filter(|o| o.len() == 1).ok_or_else(|| {
            malformed(format!("{at}: expected {{\"proc\":..}} or {{\"fwd\":..}}"))
        })?;
        if let Some(p) = obj.get("proc").and_then(Value::as_object) {
            let chan = channel_field(p, "chan", &format!("{at}.proc"))?;
            let lang = p
                .get("lang")
                .and_then(Value::as_str)
                .ok_or_else(|| malformed(format!("{at}.proc.lang: expected a string")))?;
            let body = p
                .get("body")
                .ok_or_else(|| malformed(format!("{at}.proc.body: missing")))?;
            Ok(AtomicProcess::proc(
                chan,
                NamelessObject::from_json_value(lang, body)?,
            ))
        } else if let Some(f) = obj.get("fwd").and_then(Value::as_object) {
            let from = channel_field(f, "from", &format!("{at}.fwd"))?;
            let to = channel_field(f, "to", &format!("{at}.fwd"))?;
            AtomicProcess::fwd(from, to)
        } else {
            Err(malformed(format!(
                "{at}: expected {{\"proc\":..}} or {{\"fwd\":..}}"
            )))
        }
    }
}

impl Configuration {
    pub fn from_json_value(v: &Value) -> Result<Configuration, KernelError> {
        let procs = v
            .get("procs")
            .and_then(Value::as_array)
            .ok_or_else(|| malformed("procs: expected an array"))?;
        let procs = procs
            .iter()
            .enumerate()
            .map(|(i, p)| AtomicProcess::from_json_value(p, &format!("procs[{i}]")))
            .collect::<Result<Vec<_>, _>>()?;
        Configuration::new(procs)
    }

    pub fn from_json_str(src: &str) -> Result<Configuration, KernelError> {
        let v: Value = serde_json::from_str(src).map_err(|e| malformed(e.to_string()))?;
        Configuration::from_json_value(&v)
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string(self).expect("configurations always serialize")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automaton::BitFlipState;

    #[test]
    fn golden_bitflip_and_forwarder() {
        let cfg = Configuration::new(vec![
            AtomicProcess::proc(ChannelName(0), NamelessObject::bitflip(BitFlipState::S0)),
            AtomicProcess::fwd(ChannelName(1), ChannelName(0)).unwrap(),
        ])
        .unwrap();
        let text = cfg.to_json_string();
        assert_eq!(
            text,
            r#"{"procs":[{"proc":{"body":"S0","chan":0,"lang":"bitflip"}},{"fwd":{"from":1,"to":0}}]}"#
        );
        assert_eq!(Configuration::from_json_str(&text).unwrap(), cfg);
    }

    #[test]
    fn term_body_uses_surface_syntax() {
        let src = r#"{"procs":[{"proc":{"chan":4,"lang":"sessproc","body":"recv_#2(); send()"}}]}"#;
        let cfg = Configuration::from_json_str(src).unwrap();
        let back: Value = serde_json::from_str(&cfg.to_json_string()).unwrap();
        assert_eq!(back["procs"][0]["proc"]["body"], "recv_#2(); send()");
    }

    #[test]
    fn unknown_language_tag() {
        let src = r#"{"procs":[{"proc":{"chan":0,"lang":"fortran","body":"S0"}}]}"#;
        assert_eq!(
            Configuration::from_json_str(src),
            Err(KernelError::UnknownLanguage("fortran".into()))
        );
    }

    #[test]
    fn duplicate_provider_rejected() {
        let src = r#"{"procs":[{"proc":{"chan":0,"lang":"bitflip","body":"S0"}},{"fwd":{"from":0,"to":3}}]}"#;
        assert_eq!(
            Configuration::from_json_str(src),
            Err(KernelError::DuplicateProvider(ChannelName(0)))
        );
    }

    #[test]
    fn malformed_inputs() {
        for src in [
            "[]",
            r#"{"procs":[{"proc":{"chan":-1}}]}"#,
            r#"{"procs":[{"x":1}]}"#,
            "not json",
        ] {
            assert!(
                matches!(
                    Configuration::from_json_str(src),
                    Err(KernelError::Malformed(_))
                ),
                "{src}"
            );
        }
        let src = r#"{"procs":[{"fwd":{"from":2,"to":2}}]}"#;
        assert_eq!(
            Configuration::from_json_str(src),
            Err(KernelError::SelfForward(ChannelName(2)))
        );
    }
}
