//! Dependent-set templates for caps of dimension 7.
//!
//! A template lists each dependent as a sum of labelled basis points
//! `a_1..a_8`. They are instantiated in `Z_2^7` with `a_1 = 0` and
//! `a_i = e_{i-1}` (bit `i-2`), so a dependent's mask is the OR of the unit
//! vectors of its generators other than `a_1`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::capset::Cap;
use crate::decomp::ExtendedType;
use crate::error::{Error, Result};
use crate::gf2::{Point, PointSet};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[allow(non_camel_case_types)]
pub enum TemplateId {
    INDEPENDENT8,
    R5,
    R7,
    T10_75_4,
    T10_55_2,
    T10_55_3,
    T11_755_443,
    T11_555_333,
    T11_555_332,
    T12_7555,
    T12_5555_233333,
    T12_5555_233332,
}

impl TemplateId {
    pub const ALL: [TemplateId; 12] = [
        TemplateId::INDEPENDENT8,
        TemplateId::R5,
        TemplateId::R7,
        TemplateId::T10_75_4,
        TemplateId::T10_55_2,
        TemplateId::T10_55_3,
        TemplateId::T11_755_443,
        TemplateId::T11_555_333,
        TemplateId::T11_555_332,
        TemplateId::T12_7555,
        TemplateId::T12_5555_233333,
        TemplateId::T12_5555_233332,
    ];

    pub fn label(self) -> &'static str {
        STANDARD[self as usize].0
    }

    /// Number of points in the instantiated cap.
    pub fn size(self) -> usize {
        8 + STANDARD[self as usize].1.len()
    }

    /// All templates of a given size.
    pub fn of_size(size: usize) -> impl Iterator<Item = TemplateId> {
        TemplateId::ALL.into_iter().filter(move |t| t.size() == size)
    }
}

impl fmt::Display for TemplateId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for TemplateId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        TemplateId::ALL.into_iter().find(|t| t.label() == s).ok_or_else(|| Error::UnknownLabel(s.to_string()))
    }
}

type Row = (&'static str, &'static [&'static [usize]], &'static str);

/// (label, dependents as generator indices, extended type w.r.t. a_1..a_8).
const STANDARD: [Row; 12] = [
    ("INDEPENDENT8", &[], "()"),
    ("R5", &[&[1, 2, 3, 4, 5]], "5"),
    ("R7", &[&[1, 2, 3, 4, 5, 6, 7]], "7"),
    ("T10_75_4", &[&[1, 2, 3, 4, 5, 6, 7], &[4, 5, 6, 7, 8]], "7-5-(4)"),
    ("T10_55_2", &[&[1, 2, 3, 4, 5], &[4, 5, 6, 7, 8]], "5-5-(2)"),
    ("T10_55_3", &[&[1, 2, 3, 4, 5], &[3, 4, 5, 6, 7]], "5-5-(3)"),
    ("T11_755_443", &[&[1, 2, 3, 4, 5, 6, 7], &[4, 5, 6, 7, 8], &[1, 2, 6, 7, 8]], "7-5-5-(4,4,3)"),
    ("T11_555_333", &[&[1, 2, 3, 4, 5], &[3, 4, 5, 6, 7], &[1, 3, 4, 6, 8]], "5-5-5-(3,3,3)"),
    ("T11_555_332", &[&[1, 2, 3, 4, 5], &[3, 4, 5, 6, 7], &[1, 2, 3, 7, 8]], "5-5-5-(3,3,2)"),
    (
        "T12_7555",
        &[&[1, 2, 3, 4, 5, 6, 7], &[4, 5, 6, 7, 8], &[1, 2, 6, 7, 8], &[1, 3, 5, 7, 8]],
        "7-5-5-5-(4,4,4,3,3,3)",
    ),
    (
        "T12_5555_233333",
        &[&[1, 2, 3, 4, 5], &[1, 2, 3, 7, 8], &[3, 4, 5, 6, 7], &[2, 3, 4, 6, 8]],
        "5-5-5-5-(2,3,3,3,3,3)",
    ),
    (
        "T12_5555_233332",
        &[&[1, 2, 3, 4, 5], &[1, 2, 3, 7, 8], &[3, 4, 5, 6, 7], &[2, 4, 6, 7, 8]],
        "5-5-5-5-(2,3,3,3,3,2)",
    ),
];

/// Ambient dimension of the template embedding.
pub const TEMPLATE_DIM: usize = 7;

/// Mask of `a_{i_1} + ... + a_{i_k}` under `a_1 = 0`, `a_i = e_{i-1}`.
pub fn embed(generators: &[usize]) -> u32 {
    generators.iter().fold(0, |acc, &i| if i <= 1 { acc } else { acc ^ (1 << (i - 2)) })
}

/// `a_1, ..., a_{n+1}` as points of `Z_2^n`.
pub fn generating_basis(n: usize) -> Vec<Point> {
    (1..=n + 1).map(|i| Point::new(embed(&[i]), n).expect("n validated by caller")).collect()
}

/// One template row in owned form.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TemplateSpec {
    pub label: String,
    /// Each dependent as 1-based generator indices into `a_1..a_8`.
    pub dependents: Vec<Vec<usize>>,
    pub extended_type: String,
}

/// The template data as a value, so it can be loaded, edited or replaced.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TemplateTable {
    pub templates: Vec<TemplateSpec>,
}

impl TemplateTable {
    pub fn standard() -> Self {
        TemplateTable {
            templates: STANDARD
                .iter()
                .map(|(label, deps, ty)| TemplateSpec {
                    label: label.to_string(),
                    dependents: deps.iter().map(|d| d.to_vec()).collect(),
                    extended_type: ty.to_string(),
                })
                .collect(),
        }
    }

    pub fn spec(&self, id: TemplateId) -> Result<&TemplateSpec> {
        self.templates.iter().find(|t| t.label == id.label()).ok_or_else(|| Error::UnknownLabel(id.label().to_string()))
    }

    /// The point set described by a row; not necessarily a cap.
    pub fn instantiate_set(&self, id: TemplateId) -> Result<PointSet> {
        let spec = self.spec(id)?;
        let mut set = PointSet::from_masks(TEMPLATE_DIM, generating_basis(TEMPLATE_DIM).iter().map(|p| p.mask()))?;
        for dep in &spec.dependents {
            if dep.iter().any(|&i| i == 0 || i > TEMPLATE_DIM + 1) {
                return Err(Error::InvalidBasis("generator index outside a_1..a_8"));
            }
            let mask = embed(dep);
            if !set.insert_mask(mask)? {
                return Err(Error::DuplicatePoint(mask));
            }
        }
        Ok(set)
    }

    pub fn expected_extended_type(&self, id: TemplateId) -> Result<ExtendedType> {
        self.spec(id)?.extended_type.parse()
    }
}

/// The cap described by a standard template.
pub fn instantiate(id: TemplateId) -> Cap {
    let set = TemplateTable::standard().instantiate_set(id).expect("standard templates are well formed");
    Cap::new(set).expect("standard templates are caps")
}

pub fn expected_extended_type(id: TemplateId) -> ExtendedType {
    STANDARD[id as usize].2.parse().expect("standard types parse")
}

/// Two 12-point caps in `Z_2^8` with equal basis extended type
/// `5-5-5-(3,3,3)` that are not affinely equivalent: in the first every
/// basis point takes part in a relation, in the second `a_9` does not.
pub fn higherdim_pair() -> (PointSet, PointSet) {
    const N: usize = 8;
    let frame: Vec<u32> = generating_basis(N).iter().map(|p| p.mask()).collect();
    let build = |deps: [&[usize]; 3]| {
        PointSet::from_masks(N, frame.iter().copied().chain(deps.iter().map(|d| embed(d)))).expect("distinct points")
    };
    let first = build([&[1, 2, 3, 4, 5], &[1, 2, 3, 6, 7], &[1, 2, 3, 8, 9]]);
    let second = build([&[1, 2, 3, 4, 5], &[1, 2, 3, 6, 7], &[1, 2, 4, 6, 8]]);
    (first, second)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::capset::is_cap;
    use crate::decomp::{decompose, decompose_set, extended_type};

    #[test]
    fn embedding_examples() {
        assert_eq!(instantiate(TemplateId::T10_55_2).masks(), &[0, 1, 2, 4, 8, 15, 16, 32, 64, 124]);
        assert_eq!(instantiate(TemplateId::T10_55_3).masks(), &[0, 1, 2, 4, 8, 15, 16, 32, 62, 64]);
        assert_eq!(instantiate(TemplateId::INDEPENDENT8).masks(), &[0, 1, 2, 4, 8, 16, 32, 64]);
    }

    #[test]
    fn labels_round_trip() {
        for id in TemplateId::ALL {
            assert_eq!(id.label().parse::<TemplateId>().unwrap(), id);
        }
        assert_eq!("BOGUS".parse::<TemplateId>(), Err(Error::UnknownLabel("BOGUS".into())));
        assert_eq!(TemplateId::of_size(12).count(), 3);
        assert_eq!(TemplateId::R7.size(), 9);
    }

    #[test]
    fn every_template_matches_its_type() {
        let basis = generating_basis(TEMPLATE_DIM);
        for id in TemplateId::ALL {
            let cap = instantiate(id);
            assert_eq!(cap.len(), id.size(), "{id}");
            assert_eq!(cap.dim(), 7, "{id}");
            let dec = decompose(&cap, Some(&basis)).unwrap();
            assert_eq!(extended_type(&dec), expected_extended_type(id), "{id}");
        }
    }

    #[test]
    fn expected_type_lookup() {
        assert_eq!(expected_extended_type(TemplateId::T11_555_332), "5-5-5-(3,3,2)".parse().unwrap());
        assert_eq!(expected_extended_type(TemplateId::T12_5555_233333), "5-5-5-5-(2,3,3,3,3,3)".parse().unwrap());
        let r5 = expected_extended_type(TemplateId::R5);
        assert_eq!(r5.sizes(), &[5]);
    }

    #[test]
    fn higherdim_members_are_caps_of_the_same_type() {
        let (c, c2) = higherdim_pair();
        let basis = generating_basis(8);
        for s in [&c, &c2] {
            assert!(is_cap(s).unwrap());
            assert_eq!(crate::gf2::affine_dim(s).unwrap(), 8);
            let dec = decompose_set(s, Some(&basis)).unwrap();
            assert_eq!(extended_type(&dec), "5-5-5-(3,3,3)".parse().unwrap());
        }
    }

    #[test]
    fn table_rejects_bad_rows() {
        let mut table = TemplateTable::standard();
        table.templates[4].dependents[0] = vec![1, 2, 9];
        assert!(table.instantiate_set(TemplateId::T10_55_2).is_err());
        table.templates[4].dependents[0] = vec![2];
        assert_eq!(table.instantiate_set(TemplateId::T10_55_2), Err(Error::DuplicatePoint(1)));
    }
}
