//! JSON manifests: `{schema_version, kind, payload}`.

use std::collections::BTreeMap;
use std::path::Path;
use std::sync::Arc;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::Value;
use thiserror::Error;

use crate::fincat::{validate_category, validate_functor, FinCat, FinFunctor, RawCategory};
use crate::gaction::{validate_gcategory, GCategory, OGDiagram};
use crate::group::{orbit_category, validate_group, FinGroup};
use crate::sset::{validate_sset, RawSSet, TruncSSet};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub schema_version: u32,
    pub kind: String,
    pub payload: Value,
}

#[derive(Debug, Error)]
pub enum IoError {
    #[error("cannot read `{0}`: {1}")]
    Read(String, String),
    #[error("cannot write `{0}`: {1}")]
    Write(String, String),
    #[error("malformed JSON: {0}")]
    Parse(String),
    #[error("expected a `{expected}` manifest, found `{found}`")]
    Kind { expected: String, found: String },
    #[error("unsupported schema version {0}")]
    Version(u32),
    #[error("invalid {kind}: {message}")]
    Invalid { kind: String, message: String },
}

fn invalid(kind: &str, e: impl ToString) -> IoError {
    IoError::Invalid { kind: kind.to_string(), message: e.to_string() }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RawGroup {
    pub elements: Vec<String>,
    pub table: Vec<Vec<String>>,
}

/// Object and morphism assignments by id; identity morphisms may be omitted.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct RawMaps {
    pub objects: BTreeMap<String, String>,
    #[serde(default)]
    pub morphisms: BTreeMap<String, String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RawFunctor {
    pub source: RawCategory,
    pub target: RawCategory,
    #[serde(flatten)]
    pub maps: RawMaps,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RawGAction {
    pub group: RawGroup,
    pub category: RawCategory,
    pub sigma: BTreeMap<String, RawMaps>,
}

/// Values are keyed by subgroup label `H<i>` in the order of the group's
/// subgroup list; `subgroups` records the elements of each label.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RawDiagram {
    pub group: RawGroup,
    #[serde(default)]
    pub subgroups: BTreeMap<String, Vec<String>>,
    pub values: BTreeMap<String, RawCategory>,
    #[serde(default)]
    pub restrictions: BTreeMap<String, RawMaps>,
}

pub fn manifest(kind: &str, payload: impl Serialize) -> Manifest {
    Manifest { schema_version: SCHEMA_VERSION, kind: kind.to_string(), payload: serde_json::to_value(payload).expect("serializable") }
}

pub fn parse_manifest(text: &str) -> Result<Manifest, IoError> {
    let v: Value = serde_json::from_str(text).map_err(|e| IoError::Parse(e.to_string()))?;
    let m: Manifest = serde_json::from_value(v).map_err(|e| IoError::Parse(e.to_string()))?;
    if m.schema_version != SCHEMA_VERSION {
        return Err(IoError::Version(m.schema_version));
    }
    Ok(m)
}

pub fn read_manifest(path: &Path) -> Result<Manifest, IoError> {
    let text = std::fs::read_to_string(path).map_err(|e| IoError::Read(path.display().to_string(), e.to_string()))?;
    parse_manifest(&text)
}

pub fn to_json(m: &Manifest) -> String {
    let mut s = serde_json::to_string_pretty(m).expect("serializable");
    s.push('\n');
    s
}

pub fn write_manifest(path: &Path, m: &Manifest) -> Result<(), IoError> {
    std::fs::write(path, to_json(m)).map_err(|e| IoError::Write(path.display().to_string(), e.to_string()))
}

fn payload<T: DeserializeOwned>(m: &Manifest, kind: &str) -> Result<T, IoError> {
    if m.kind != kind {
        return Err(IoError::Kind { expected: kind.to_string(), found: m.kind.clone() });
    }
    serde_json::from_value(m.payload.clone()).map_err(|e| invalid(kind, e))
}

pub fn encode_category(c: &FinCat) -> Manifest {
    manifest("category", c.to_raw())
}

pub fn decode_category(m: &Manifest) -> Result<FinCat, IoError> {
    let raw: RawCategory = payload(m, "category")?;
    validate_category(&raw).map_err(|e| invalid("category", e))
}

pub fn raw_group(g: &FinGroup) -> RawGroup {
    RawGroup { elements: g.elements().to_vec(), table: g.table_ids() }
}

fn group_from_raw(raw: &RawGroup) -> Result<FinGroup, IoError> {
    validate_group(&raw.elements, &raw.table).map_err(|e| invalid("group", e))
}

pub fn encode_group(g: &FinGroup) -> Manifest {
    manifest("group", raw_group(g))
}

pub fn decode_group(m: &Manifest) -> Result<FinGroup, IoError> {
    group_from_raw(&payload(m, "group")?)
}

pub fn raw_maps(f: &FinFunctor) -> RawMaps {
    let (s, t) = (f.source(), f.target());
    RawMaps {
        objects: (0..s.num_objects()).map(|x| (s.object_id(x).to_string(), t.object_id(f.on_object(x)).to_string())).collect(),
        morphisms: s.non_identity_morphisms().map(|m| (s.morphism_id(m).to_string(), t.morphism_id(f.on_morphism(m)).to_string())).collect(),
    }
}

fn functor_from_maps(s: Arc<FinCat>, t: Arc<FinCat>, maps: &RawMaps, kind: &str) -> Result<FinFunctor, IoError> {
    validate_functor(s, t, &maps.objects, &maps.morphisms).map_err(|e| invalid(kind, e))
}

pub fn encode_functor(f: &FinFunctor) -> Manifest {
    manifest("functor", RawFunctor { source: f.source().to_raw(), target: f.target().to_raw(), maps: raw_maps(f) })
}

pub fn decode_functor(m: &Manifest) -> Result<FinFunctor, IoError> {
    let raw: RawFunctor = payload(m, "functor")?;
    let s = Arc::new(validate_category(&raw.source).map_err(|e| invalid("functor source", e))?);
    let t = Arc::new(validate_category(&raw.target).map_err(|e| invalid("functor target", e))?);
    functor_from_maps(s, t, &raw.maps, "functor")
}

pub fn encode_gaction(x: &GCategory) -> Manifest {
    let g = x.group();
    let sigma = (0..g.order()).map(|e| (g.element_id(e).to_string(), raw_maps(x.sigma(e)))).collect();
    manifest("gaction", RawGAction { group: raw_group(g), category: x.base().to_raw(), sigma })
}

pub fn decode_gaction(m: &Manifest) -> Result<GCategory, IoError> {
    let raw: RawGAction = payload(m, "gaction")?;
    let g = Arc::new(group_from_raw(&raw.group)?);
    let base = Arc::new(validate_category(&raw.category).map_err(|e| invalid("gaction category", e))?);
    let action = g
        .elements()
        .iter()
        .map(|e| {
            let maps = raw.sigma.get(e).ok_or_else(|| invalid("gaction", format!("no sigma for element `{e}`")))?;
            functor_from_maps(base.clone(), base.clone(), maps, "gaction")
        })
        .collect::<Result<Vec<_>, _>>()?;
    validate_gcategory(g, base, action).map_err(|e| invalid("gaction", e))
}

pub fn encode_sset(x: &TruncSSet) -> Manifest {
    manifest("sset", x.to_raw())
}

pub fn decode_sset(m: &Manifest) -> Result<TruncSSet, IoError> {
    let raw: RawSSet = payload(m, "sset")?;
    validate_sset(&raw).map_err(|e| invalid("sset", e))
}

pub fn encode_ogdiagram(y: &OGDiagram) -> Manifest {
    let orbit = y.orbit();
    let g = orbit.group();
    let oc = orbit.category();
    let subgroups = orbit
        .subgroups()
        .iter()
        .enumerate()
        .map(|(i, h)| (orbit.subgroup_label(i), h.elements().iter().map(|&e| g.element_id(e).to_string()).collect()))
        .collect();
    let values = y.values().iter().enumerate().map(|(i, v)| (orbit.subgroup_label(i), v.to_raw())).collect();
    let restrictions = (0..oc.num_morphisms())
        .filter(|&a| !oc.is_identity(a))
        .map(|a| (oc.morphism_id(a).to_string(), raw_maps(y.restriction(a))))
        .collect();
    manifest("ogdiagram", RawDiagram { group: raw_group(g), subgroups, values, restrictions })
}

pub fn decode_ogdiagram(m: &Manifest) -> Result<OGDiagram, IoError> {
    let raw: RawDiagram = payload(m, "ogdiagram")?;
    let g = Arc::new(group_from_raw(&raw.group)?);
    let orbit = Arc::new(orbit_category(&g));
    for (i, h) in orbit.subgroups().iter().enumerate() {
        let label = orbit.subgroup_label(i);
        if let Some(listed) = raw.subgroups.get(&label) {
            let mut want: Vec<&str> = h.elements().iter().map(|&e| g.element_id(e)).collect();
            let mut got: Vec<&str> = listed.iter().map(String::as_str).collect();
            want.sort_unstable();
            got.sort_unstable();
            if want != got {
                return Err(invalid("ogdiagram", format!("subgroup `{label}` does not match the subgroup list")));
            }
        }
    }
    let values = (0..orbit.subgroups().len())
        .map(|i| {
            let label = orbit.subgroup_label(i);
            let raw_c = raw.values.get(&label).ok_or_else(|| invalid("ogdiagram", format!("no value for `{label}`")))?;
            Ok(Arc::new(validate_category(raw_c).map_err(|e| invalid("ogdiagram value", e))?))
        })
        .collect::<Result<Vec<_>, IoError>>()?;
    let oc = orbit.category().clone();
    let restriction = (0..oc.num_morphisms())
        .map(|a| {
            let (h, k) = (oc.src(a), oc.tgt(a));
            match raw.restrictions.get(oc.morphism_id(a)) {
                Some(maps) => functor_from_maps(values[k].clone(), values[h].clone(), maps, "ogdiagram"),
                None if oc.is_identity(a) => Ok(FinFunctor::identity(values[h].clone())),
                None => Err(invalid("ogdiagram", format!("no restriction along `{}`", oc.morphism_id(a)))),
            }
        })
        .collect::<Result<Vec<_>, _>>()?;
    OGDiagram::new(orbit, values, restriction).map_err(|e| invalid("ogdiagram", e))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fincat::chain;
    use crate::gaction::{phi, tensor};
    use crate::group::{coset_gset, FinGroup};
    use crate::sset::{standard_complex, StandardKind};

    fn reparse(m: &Manifest) -> Manifest {
        parse_manifest(&to_json(m)).unwrap()
    }

    #[test]
    fn round_trips() {
        let c = chain(2);
        assert_eq!(decode_category(&reparse(&encode_category(&c))).unwrap(), c);
        let g = FinGroup::symmetric3();
        assert_eq!(decode_group(&reparse(&encode_group(&g))).unwrap(), g);
        let s = standard_complex(StandardKind::Boundary, 2, None).unwrap();
        assert_eq!(decode_sset(&reparse(&encode_sset(&s))).unwrap(), s);
        let g = Arc::new(g);
        let x = tensor(&coset_gset(&g, &g.trivial_subgroup()).unwrap(), &chain(1));
        let back = decode_gaction(&reparse(&encode_gaction(&x))).unwrap();
        assert_eq!(**back.base(), **x.base());
        assert!((0..6).all(|e| back.sigma(e) == x.sigma(e) || back.sigma(e).id_maps() == x.sigma(e).id_maps()));
        let y = phi(&x);
        let back = decode_ogdiagram(&reparse(&encode_ogdiagram(&y))).unwrap();
        assert_eq!(back.values().len(), y.values().len());
        assert!(back.restrictions().iter().zip(y.restrictions()).all(|(a, b)| a.id_maps() == b.id_maps()));
    }

    #[test]
    fn wrong_kind_is_reported() {
        let m = encode_category(&chain(1));
        assert!(matches!(decode_group(&m), Err(IoError::Kind { .. })));
    }
}
