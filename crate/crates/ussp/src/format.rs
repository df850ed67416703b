//! JSON descriptors for models, groups, sheaves and towers, and their
//! conversion into engine objects.
//!
//! Every conversion error carries the JSON pointer of the offending value.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use ussp_core::algebra::{FgAbGroup, FinGroup, Int, Mat};
use ussp_core::coniveau::{AbSheaf, GroupSheaf, RankedPosetModel};
use ussp_core::spectral::{group_tower, ReesSystem};
use ussp_core::world::Fin;

use crate::error::InputError;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PointDesc {
    pub id: String,
    pub codim: usize,
}

/// `specializations` are `[special, generic]` pairs of point ids.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelDesc {
    pub points: Vec<PointDesc>,
    #[serde(default)]
    pub specializations: Vec<(String, String)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GroupDesc {
    Trivial,
    Quaternion,
    Cyclic(usize),
    Dihedral(usize),
    Symmetric(usize),
    Alternating(usize),
    /// Cayley table on `0..n`, identity `0`.
    Table(Vec<Vec<usize>>),
    /// Elements are mixed-radix tuples, last factor fastest.
    Product(Vec<GroupDesc>),
}

/// A stalk is a list of cyclic orders, one per generator, `0` meaning `Z`.
/// Restriction matrices act on these generators (rows: target).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AbSheafDesc {
    pub stalks: BTreeMap<String, Vec<Int>>,
    #[serde(default)]
    pub restrictions: Vec<AbRestrictionDesc>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AbRestrictionDesc {
    pub from: String,
    pub to: String,
    pub matrix: Vec<Vec<Int>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupSheafDesc {
    pub stalks: BTreeMap<String, GroupDesc>,
    #[serde(default)]
    pub restrictions: Vec<GroupRestrictionDesc>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupRestrictionDesc {
    pub from: String,
    pub to: String,
    /// Image of each element of the source stalk.
    pub map: Vec<usize>,
}

/// A tower `Γ_P -> ... -> Γ_0`; `maps[p - 1]` is `Γ_p -> Γ_{p-1}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TowerDesc {
    pub groups: Vec<GroupDesc>,
    #[serde(default)]
    pub maps: Vec<Vec<usize>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TheoryDesc {
    /// `K(F, level)` for an abelian sheaf `F`.
    Em { sheaf: AbSheafDesc, level: usize },
    /// Torsors under a sheaf of groups.
    Torsor(GroupSheafDesc),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SheafDesc {
    Abelian(AbSheafDesc),
    Group(GroupSheafDesc),
}

pub(crate) fn engine(path: &str, e: ussp_core::Error) -> InputError {
    InputError::schema(path, e.to_string())
}

fn child(path: &str, key: impl std::fmt::Display) -> String {
    let key = key.to_string().replace('~', "~0").replace('/', "~1");
    format!("{path}/{key}")
}

impl ModelDesc {
    pub fn build(&self, path: &str) -> Result<RankedPosetModel, InputError> {
        let mut index = BTreeMap::new();
        for (i, p) in self.points.iter().enumerate() {
            if index.insert(p.id.as_str(), i).is_some() {
                return Err(InputError::schema(&child(&child(&child(path, "points"), i), "id"), format!("duplicate point id {:?}", p.id)));
            }
        }
        let mut pairs = Vec::new();
        for (i, (a, b)) in self.specializations.iter().enumerate() {
            let at = child(&child(path, "specializations"), i);
            let x = *index.get(a.as_str()).ok_or_else(|| InputError::schema(&child(&at, 0), format!("unknown point {a:?}")))?;
            let y = *index.get(b.as_str()).ok_or_else(|| InputError::schema(&child(&at, 1), format!("unknown point {b:?}")))?;
            pairs.push((x, y));
        }
        let ids = self.points.iter().map(|p| p.id.clone()).collect();
        let codim = self.points.iter().map(|p| p.codim).collect();
        RankedPosetModel::new(ids, codim, &pairs).map_err(|e| engine(path, e))
    }

    pub fn describe(m: &RankedPosetModel) -> Self {
        let points = (0..m.len()).map(|x| PointDesc { id: m.id(x).to_string(), codim: m.codim(x) }).collect();
        let specializations = m.covers().into_iter().map(|(x, y)| (m.id(x).to_string(), m.id(y).to_string())).collect();
        ModelDesc { points, specializations }
    }
}

impl GroupDesc {
    pub fn build(&self, path: &str) -> Result<FinGroup, InputError> {
        let small = |n: usize, lo: usize, hi: usize, what: &str| {
            if n < lo || n > hi {
                Err(InputError::schema(path, format!("{what} needs a parameter in {lo}..={hi}, got {n}")))
            } else {
                Ok(())
            }
        };
        Ok(match self {
            GroupDesc::Trivial => FinGroup::trivial(),
            GroupDesc::Quaternion => FinGroup::quaternion(),
            GroupDesc::Cyclic(n) => {
                small(*n, 1, 4096, "cyclic")?;
                FinGroup::cyclic(*n)
            }
            GroupDesc::Dihedral(n) => {
                small(*n, 1, 2048, "dihedral")?;
                FinGroup::dihedral(*n)
            }
            GroupDesc::Symmetric(n) => {
                small(*n, 1, 6, "symmetric")?;
                FinGroup::symmetric(*n)
            }
            GroupDesc::Alternating(n) => {
                small(*n, 1, 6, "alternating")?;
                FinGroup::alternating(*n)
            }
            GroupDesc::Table(rows) => FinGroup::from_table(rows.clone()).map_err(|e| engine(path, e))?,
            GroupDesc::Product(parts) => {
                let at = child(path, "product");
                let gs = parts.iter().enumerate().map(|(i, g)| g.build(&child(&at, i))).collect::<Result<Vec<_>, _>>()?;
                let order = gs.iter().try_fold(1usize, |a, g| a.checked_mul(g.order()).filter(|&n| n <= 4096));
                if order.is_none() {
                    return Err(InputError::schema(path, "product has more than 4096 elements"));
                }
                FinGroup::product(&gs)
            }
        })
    }

    pub fn describe(g: &FinGroup) -> Self {
        if g.order() == 1 {
            GroupDesc::Trivial
        } else {
            GroupDesc::Table(g.table_rows())
        }
    }
}

fn stalk_ids<'a, T>(m: &RankedPosetModel, stalks: &'a BTreeMap<String, T>, path: &str) -> Result<Vec<&'a T>, InputError> {
    let at = child(path, "stalks");
    if let Some(extra) = stalks.keys().find(|k| m.index_of(k).is_none()) {
        return Err(InputError::schema(&child(&at, extra), format!("unknown point {extra:?}")));
    }
    (0..m.len())
        .map(|x| stalks.get(m.id(x)).ok_or_else(|| InputError::schema(&at, format!("missing stalk for point {:?}", m.id(x)))))
        .collect()
}

fn endpoints(m: &RankedPosetModel, from: &str, to: &str, at: &str) -> Result<(usize, usize), InputError> {
    let x = m.index_of(from).ok_or_else(|| InputError::schema(&child(at, "from"), format!("unknown point {from:?}")))?;
    let y = m.index_of(to).ok_or_else(|| InputError::schema(&child(at, "to"), format!("unknown point {to:?}")))?;
    Ok((x, y))
}

fn presentation(factors: &[Int], path: &str) -> Result<FgAbGroup, InputError> {
    if factors.iter().any(|&n| n < 0) {
        return Err(InputError::schema(path, "cyclic orders must be non-negative"));
    }
    let rels = factors
        .iter()
        .enumerate()
        .map(|(i, &n)| {
            let mut v = vec![0; factors.len()];
            v[i] = n;
            v
        })
        .collect();
    FgAbGroup::new(factors.len(), rels).map_err(|e| engine(path, e))
}

impl AbSheafDesc {
    pub fn build(&self, m: &RankedPosetModel, path: &str) -> Result<AbSheaf, InputError> {
        let raw = stalk_ids(m, &self.stalks, path)?;
        let pres = raw
            .iter()
            .enumerate()
            .map(|(x, f)| presentation(f, &child(&child(path, "stalks"), m.id(x))))
            .collect::<Result<Vec<_>, _>>()?;
        let mut res = BTreeMap::new();
        for (i, r) in self.restrictions.iter().enumerate() {
            let at = child(&child(path, "restrictions"), i);
            let (x, y) = endpoints(m, &r.from, &r.to, &at)?;
            let cols = pres[x].rank();
            if r.matrix.len() != pres[y].rank() || r.matrix.iter().any(|row| row.len() != cols) {
                return Err(InputError::schema(
                    &child(&at, "matrix"),
                    format!("expected a {} x {} matrix", pres[y].rank(), cols),
                ));
            }
            let mat = Mat::from_rows(&r.matrix, cols);
            let h = pres[x].hom_to(&pres[y], &mat).map_err(|e| engine(&child(&at, "matrix"), e))?;
            if res.insert((x, y), h).is_some() {
                return Err(InputError::schema(&at, "restriction given twice"));
            }
        }
        let stalks = pres.iter().map(|p| p.canonical().clone()).collect();
        AbSheaf::new(m, stalks, res).map_err(|e| engine(&child(path, "restrictions"), e))
    }

    pub fn describe(f: &AbSheaf) -> Self {
        let m = f.model();
        let gens = |x: usize| {
            let a = f.stalk(x);
            let mut v: Vec<Int> = a.torsion().to_vec();
            v.extend(std::iter::repeat_n(0, a.free_rank()));
            v
        };
        let stalks = (0..m.len()).map(|x| (m.id(x).to_string(), gens(x))).collect();
        let restrictions = m
            .covers()
            .into_iter()
            .map(|(x, y)| AbRestrictionDesc { from: m.id(x).to_string(), to: m.id(y).to_string(), matrix: f.res(x, y).m.to_rows() })
            .collect();
        AbSheafDesc { stalks, restrictions }
    }
}

impl GroupSheafDesc {
    pub fn build(&self, m: &RankedPosetModel, path: &str) -> Result<GroupSheaf, InputError> {
        let raw = stalk_ids(m, &self.stalks, path)?;
        let groups = raw
            .iter()
            .enumerate()
            .map(|(x, g)| g.build(&child(&child(path, "stalks"), m.id(x))))
            .collect::<Result<Vec<_>, _>>()?;
        let mut res = BTreeMap::new();
        for (i, r) in self.restrictions.iter().enumerate() {
            let at = child(&child(path, "restrictions"), i);
            let (x, y) = endpoints(m, &r.from, &r.to, &at)?;
            if r.map.len() != groups[x].order() || r.map.iter().any(|&v| v >= groups[y].order()) {
                return Err(InputError::schema(
                    &child(&at, "map"),
                    format!("expected {} images in 0..{}", groups[x].order(), groups[y].order()),
                ));
            }
            if !groups[x].is_hom(&groups[y], &r.map) {
                return Err(InputError::schema(&child(&at, "map"), "not a homomorphism"));
            }
            if res.insert((x, y), r.map.clone()).is_some() {
                return Err(InputError::schema(&at, "restriction given twice"));
            }
        }
        GroupSheaf::new(m, groups, res).map_err(|e| engine(&child(path, "restrictions"), e))
    }

    pub fn describe(g: &GroupSheaf) -> Self {
        let m = g.model();
        let stalks = (0..m.len()).map(|x| (m.id(x).to_string(), GroupDesc::describe(g.stalk(x)))).collect();
        let restrictions = m
            .covers()
            .into_iter()
            .map(|(x, y)| GroupRestrictionDesc { from: m.id(x).to_string(), to: m.id(y).to_string(), map: g.res_table(x, y) })
            .collect();
        GroupSheafDesc { stalks, restrictions }
    }
}

impl TowerDesc {
    pub fn build(&self, path: &str) -> Result<ReesSystem<Fin>, InputError> {
        let groups = self
            .groups
            .iter()
            .enumerate()
            .map(|(i, g)| g.build(&child(&child(path, "groups"), i)))
            .collect::<Result<Vec<_>, _>>()?;
        if groups.is_empty() {
            return Err(InputError::schema(&child(path, "groups"), "a tower needs at least one group"));
        }
        if self.maps.len() + 1 != groups.len() {
            return Err(InputError::schema(&child(path, "maps"), format!("{} groups need {} maps", groups.len(), groups.len() - 1)));
        }
        for (i, f) in self.maps.iter().enumerate() {
            let (src, tgt) = (&groups[i + 1], &groups[i]);
            if f.len() != src.order() || f.iter().any(|&v| v >= tgt.order()) || !src.is_hom(tgt, f) {
                return Err(InputError::schema(&child(&child(path, "maps"), i), format!("not a homomorphism Γ_{} -> Γ_{i}", i + 1)));
            }
        }
        group_tower(&groups, &self.maps).map_err(|e| engine(path, e))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use ussp_core::algebra::Ab;

    #[test]
    fn dangling_specialization_names_the_path() {
        let d = ModelDesc {
            points: vec![PointDesc { id: "eta".into(), codim: 0 }],
            specializations: vec![("s".into(), "eta".into())],
        };
        let e = d.build("/model").unwrap_err();
        assert_eq!(e.pointer(), Some("/model/specializations/0/0"));
    }

    #[test]
    fn sheaves_round_trip_through_descriptors() {
        let m = RankedPosetModel::dedekind(2);
        let f = AbSheaf::twisted(&m, &Ab::from_cyclic_factors(&[0, 6]), 5);
        let back = AbSheafDesc::describe(&f).build(&m, "").unwrap();
        for (x, y) in m.covers() {
            assert_eq!(back.res(x, y), f.res(x, y));
        }
        let g = GroupSheaf::skyscraper(&m, 1, &FinGroup::symmetric(3));
        let back = GroupSheafDesc::describe(&g).build(&m, "").unwrap();
        assert_eq!(back.stalks(), g.stalks());
        assert_eq!(ModelDesc::describe(&m).build("").unwrap().ids(), m.ids());
    }

    #[test]
    fn presentations_are_normalized() {
        let m = RankedPosetModel::point();
        let d = AbSheafDesc { stalks: [("x".to_string(), vec![2, 3])].into(), restrictions: vec![] };
        assert_eq!(d.build(&m, "").unwrap().stalk(0), &Ab::cyclic(6));
    }

    #[test]
    fn non_homomorphic_restriction_is_rejected() {
        let m = RankedPosetModel::dvr();
        let d = GroupSheafDesc {
            stalks: [("eta".to_string(), GroupDesc::Cyclic(2)), ("s".to_string(), GroupDesc::Cyclic(3))].into(),
            restrictions: vec![GroupRestrictionDesc { from: "s".into(), to: "eta".into(), map: vec![0, 1, 1] }],
        };
        assert_eq!(d.build(&m, "/sheaf/group").unwrap_err().pointer(), Some("/sheaf/group/restrictions/0/map"));
    }
}
