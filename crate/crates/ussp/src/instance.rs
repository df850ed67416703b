//! Instance files: one JSON document naming a kind, its payload and options.

use std::io::Read;

use serde::{Deserialize, Serialize};
use ussp_core::coniveau::{AbSheaf, EmTheory, GroupSheaf, RankedPosetModel};
use ussp_core::spectral::ReesSystem;
use ussp_core::world::Fin;

use crate::error::InputError;
use crate::format::{ModelDesc, SheafDesc, TheoryDesc, TowerDesc};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Kind {
    Model,
    Couple,
    Rees,
    Theory,
    Sheaf,
}

impl Kind {
    pub fn name(self) -> &'static str {
        match self {
            Kind::Model => "model",
            Kind::Couple => "couple",
            Kind::Rees => "rees",
            Kind::Theory => "theory",
            Kind::Sheaf => "sheaf",
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Options {
    /// Largest `p` and `n` shown in page tables.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub window: Option<(usize, usize)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_page: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cap: Option<usize>,
}

impl Options {
    /// Fields set in `over` win.
    pub fn overridden_by(&self, over: &Options) -> Options {
        Options {
            window: over.window.or(self.window),
            q: over.q.or(self.q),
            max_page: over.max_page.or(self.max_page),
            cap: over.cap.or(self.cap),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceDesc {
    pub kind: Kind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub model: Option<ModelDesc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tower: Option<TowerDesc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub theory: Option<TheoryDesc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sheaf: Option<SheafDesc>,
    #[serde(default, skip_serializing_if = "is_default")]
    pub options: Options,
}

fn is_default(o: &Options) -> bool {
    *o == Options::default()
}

#[derive(Debug)]
pub enum Payload {
    Model(RankedPosetModel),
    Tower(ReesSystem<Fin>),
    Em(EmTheory),
    Torsor(GroupSheaf),
    AbSheaf(AbSheaf),
    GroupSheaf(GroupSheaf),
}

#[derive(Debug)]
pub struct Instance {
    pub kind: Kind,
    pub payload: Payload,
    pub options: Options,
    pub desc: InstanceDesc,
}

impl Instance {
    pub fn model(&self) -> Option<&RankedPosetModel> {
        use ussp_core::coniveau::SupportTheory;
        match &self.payload {
            Payload::Model(m) => Some(m),
            Payload::Tower(_) => None,
            Payload::Em(t) => Some(t.model()),
            Payload::Torsor(g) | Payload::GroupSheaf(g) => Some(g.model()),
            Payload::AbSheaf(f) => Some(f.model()),
        }
    }
}

fn required<'a, T>(v: &'a Option<T>, key: &str, kind: Kind) -> Result<&'a T, InputError> {
    v.as_ref().ok_or_else(|| InputError::schema(&format!("/{key}"), format!("a {} instance needs {key:?}", kind.name())))
}

fn unexpected<T>(v: &Option<T>, key: &str, kind: Kind) -> Result<(), InputError> {
    match v {
        Some(_) => Err(InputError::schema(&format!("/{key}"), format!("a {} instance has no {key:?}", kind.name()))),
        None => Ok(()),
    }
}

impl InstanceDesc {
    pub fn build(&self) -> Result<Instance, InputError> {
        let k = self.kind;
        let payload = match k {
            Kind::Model | Kind::Theory | Kind::Sheaf => {
                unexpected(&self.tower, "tower", k)?;
                let m = required(&self.model, "model", k)?.build("/model")?;
                match k {
                    Kind::Model => {
                        unexpected(&self.theory, "theory", k)?;
                        unexpected(&self.sheaf, "sheaf", k)?;
                        Payload::Model(m)
                    }
                    Kind::Theory => {
                        unexpected(&self.sheaf, "sheaf", k)?;
                        match required(&self.theory, "theory", k)? {
                            TheoryDesc::Em { sheaf, level } => Payload::Em(EmTheory::new(&sheaf.build(&m, "/theory/em/sheaf")?, *level)),
                            TheoryDesc::Torsor(g) => Payload::Torsor(g.build(&m, "/theory/torsor")?),
                        }
                    }
                    _ => {
                        unexpected(&self.theory, "theory", k)?;
                        match required(&self.sheaf, "sheaf", k)? {
                            SheafDesc::Abelian(f) => Payload::AbSheaf(f.build(&m, "/sheaf/abelian")?),
                            SheafDesc::Group(g) => Payload::GroupSheaf(g.build(&m, "/sheaf/group")?),
                        }
                    }
                }
            }
            Kind::Couple | Kind::Rees => {
                unexpected(&self.model, "model", k)?;
                unexpected(&self.theory, "theory", k)?;
                unexpected(&self.sheaf, "sheaf", k)?;
                Payload::Tower(required(&self.tower, "tower", k)?.build("/tower")?)
            }
        };
        if let Some((p, q)) = self.options.window {
            if p > 64 || q > 64 {
                return Err(InputError::schema("/options/window", "window bounds are at most 64"));
            }
        }
        Ok(Instance { kind: k, payload, options: self.options.clone(), desc: self.clone() })
    }
}

fn pointer(path: &serde_path_to_error::Path) -> String {
    use serde_path_to_error::Segment;
    let mut out = String::new();
    for seg in path.iter() {
        match seg {
            Segment::Seq { index } => out.push_str(&format!("/{index}")),
            Segment::Map { key } => out.push_str(&format!("/{}", key.replace('~', "~0").replace('/', "~1"))),
            Segment::Enum { variant } => out.push_str(&format!("/{variant}")),
            Segment::Unknown => {}
        }
    }
    out
}

pub fn parse_str(text: &str) -> Result<Instance, InputError> {
    let value: serde_json::Value = serde_json::from_str(text)
        .map_err(|e| InputError::Syntax { line: e.line(), column: e.column(), message: e.to_string() })?;
    let desc: InstanceDesc = serde_path_to_error::deserialize(value).map_err(|e| {
        let p = pointer(e.path());
        let inner = e.into_inner().to_string();
        InputError::schema(&p, inner)
    })?;
    desc.build()
}

pub fn parse_reader(mut r: impl Read) -> Result<Instance, InputError> {
    let mut text = String::new();
    r.read_to_string(&mut text).map_err(|e| InputError::Io(e.to_string()))?;
    parse_str(&text)
}

/// Reads an instance from a path, `-` meaning standard input.
pub fn parse_instance(path: &str) -> Result<Instance, InputError> {
    if path == "-" {
        return parse_reader(std::io::stdin().lock());
    }
    let text = std::fs::read_to_string(path).map_err(|e| InputError::Io(format!("{path}: {e}")))?;
    parse_str(&text)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_point_model() {
        let i = parse_str(r#"{"kind":"model","model":{"points":[{"id":"x","codim":0}]}}"#).unwrap();
        assert_eq!(i.kind, Kind::Model);
        assert_eq!(i.model().unwrap().len(), 1);
    }

    #[test]
    fn type_errors_carry_pointers() {
        let e = parse_str(r#"{"kind":"model","model":{"points":[{"id":"x","codim":-1}]}}"#).unwrap_err();
        assert_eq!(e.pointer(), Some("/model/points/0/codim"));
        let e = parse_str(r#"{"kind":"sheaf","model":{"points":[{"id":"x","codim":0}]}}"#).unwrap_err();
        assert_eq!(e.pointer(), Some("/sheaf"));
    }

    #[test]
    fn syntax_errors_report_positions() {
        assert!(matches!(parse_str("{\n  \"kind\": }"), Err(InputError::Syntax { line: 2, .. })));
    }
}
