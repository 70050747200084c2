use std::fmt;

use serde::{Deserialize, Serialize};

use super::ChannelName;

/// Boolean-valued branch label. `Pi1` is `false`, `Pi2` is `true`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Selector {
    Pi1,
    Pi2,
}

impl Selector {
    pub const BOTH: [Selector; 2] = [Selector::Pi1, Selector::Pi2];

    pub fn as_bool(self) -> bool {
        matches!(self, Selector::Pi2)
    }

    pub fn index(self) -> u8 {
        match self {
            Selector::Pi1 => 1,
            Selector::Pi2 => 2,
        }
    }

    pub fn from_index(i: u64) -> Option<Selector> {
        match i {
            1 => Some(Selector::Pi1),
            2 => Some(Selector::Pi2),
            _ => None,
        }
    }
}

impl fmt::Display for Selector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "pi{}", self.index())
    }
}

impl Serialize for Selector {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_u8(self.index())
    }
}

impl<'de> Deserialize<'de> for Selector {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let i = u64::deserialize(d)?;
        Selector::from_index(i)
            .ok_or_else(|| serde::de::Error::custom(format!("selector must be 1 or 2, got {i}")))
    }
}

/// Message content.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Payload {
    Sel(Selector),
    Close,
    Chan(ChannelName),
}

impl fmt::Display for Payload {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Payload::Sel(s) => write!(f, "{s}"),
            Payload::Close => write!(f, "()"),
            Payload::Chan(c) => write!(f, "{c}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Direction {
    #[serde(rename = "!")]
    Send,
    #[serde(rename = "?")]
    Receive,
}

impl Direction {
    pub fn flip(self) -> Direction {
        match self {
            Direction::Send => Direction::Receive,
            Direction::Receive => Direction::Send,
        }
    }
}

/// Transition label: silent, or a send/receive of a payload on a channel.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Action {
    Silent,
    Labelled {
        chan: ChannelName,
        dir: Direction,
        payload: Payload,
    },
}

impl Action {
    pub fn send(chan: ChannelName, payload: Payload) -> Action {
        Action::Labelled {
            chan,
            dir: Direction::Send,
            payload,
        }
    }

    pub fn receive(chan: ChannelName, payload: Payload) -> Action {
        Action::Labelled {
            chan,
            dir: Direction::Receive,
            payload,
        }
    }

    /// `a!p` and `a?p` are each other's complement; silent has none.
    pub fn complement(self) -> Option<Action> {
        match self {
            Action::Silent => None,
            Action::Labelled { chan, dir, payload } => Some(Action::Labelled {
                chan,
                dir: dir.flip(),
                payload,
            }),
        }
    }

    pub fn is_silent(self) -> bool {
        matches!(self, Action::Silent)
    }

    pub fn rename(self, rho: &dyn Fn(ChannelName) -> ChannelName) -> Action {
        match self {
            Action::Silent => Action::Silent,
            Action::Labelled { chan, dir, payload } => Action::Labelled {
                chan: rho(chan),
                dir,
                payload: match payload {
                    Payload::Chan(c) => Payload::Chan(rho(c)),
                    p => p,
                },
            },
        }
    }
}

impl fmt::Display for Action {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Action::Silent => write!(f, "eps"),
            Action::Labelled { chan, dir, payload } => {
                let d = match dir {
                    Direction::Send => '!',
                    Direction::Receive => '?',
                };
                write!(f, "{chan}{d}{payload}")
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complement_is_an_involution_on_labelled() {
        let a = ChannelName(3);
        for p in [
            Payload::Close,
            Payload::Sel(Selector::Pi1),
            Payload::Chan(ChannelName(9)),
        ] {
            let send = Action::send(a, p);
            assert_eq!(send.complement(), Some(Action::receive(a, p)));
            assert_eq!(send.complement().unwrap().complement(), Some(send));
        }
        assert_eq!(Action::Silent.complement(), None);
    }

    #[test]
    fn selector_booleans() {
        assert!(!Selector::Pi1.as_bool());
        assert!(Selector::Pi2.as_bool());
    }

    #[test]
    fn display() {
        let a = ChannelName(1);
        assert_eq!(Action::send(a, Payload::Close).to_string(), "#1!()");
        assert_eq!(
            Action::receive(a, Payload::Sel(Selector::Pi2)).to_string(),
            "#1?pi2"
        );
    }
}
