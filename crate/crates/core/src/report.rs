//! One-shot verification of the dimension-7 classification, as a
//! machine-readable report with a witness per claim.

use std::collections::BTreeMap;

use itertools::Itertools;
use rand::seq::{IteratorRandom, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use crate::capset::{extension_candidates, is_cap, is_complete, quad_closure_1, Cap};
use crate::classifier::{
    classify, lemma_violations, max_cap_size, tait_won_bounds, thirteen_cap_inclusion_exclusion, ClassTable,
};
use crate::decomp::{decompose, decompose_set, exchange_basis, extended_type, type_census, ExtendedType};
use crate::equivalence::{are_equivalent, canonical_form, find_isomorphism, verify_map};
use crate::error::{Error, Result};
use crate::gf2::{self, bit_string, AffineMap, Frame, Point};
use crate::templates::{embed, generating_basis, higherdim_pair, TemplateId, TemplateTable, TEMPLATE_DIM};

pub const REPORT_SCHEMA: &str = "report v1";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

#[derive(Clone, Debug, Serialize)]
pub struct Claim {
    pub id: &'static str,
    /// Acceptance criterion number, 1 to 12.
    pub criterion: u8,
    pub status: Status,
    pub witness: Value,
}

#[derive(Clone, Debug, Serialize)]
pub struct VerificationReport {
    pub schema: &'static str,
    pub claims: Vec<Claim>,
}

impl VerificationReport {
    pub fn all_pass(&self) -> bool {
        self.claims.iter().all(|c| c.status == Status::Pass)
    }

    pub fn claim(&self, id: &str) -> Option<&Claim> {
        self.claims.iter().find(|c| c.id == id)
    }
}

#[derive(Clone, Debug)]
pub struct ReportOptions {
    /// Random exchanges satisfying the hypothesis.
    pub exchange_trials: usize,
    /// Random affine maps applied to each template.
    pub invariance_maps: usize,
    pub seed: u64,
}

impl Default for ReportOptions {
    fn default() -> Self {
        ReportOptions { exchange_trials: 10_000, invariance_maps: 1000, seed: 0 }
    }
}

pub fn map_json(map: &AffineMap) -> Value {
    json!({
        "rows": map.rows().iter().map(|&r| bit_string(r, map.n())).collect::<Vec<_>>(),
        "translation": bit_string(map.translation(), map.n()),
    })
}

fn type_strings<'a>(types: impl IntoIterator<Item = &'a ExtendedType>) -> Vec<String> {
    types.into_iter().map(|t| t.to_string()).collect()
}

fn counts_json(counts: &BTreeMap<usize, usize>) -> Value {
    json!(counts.iter().map(|(k, v)| (k.to_string(), v)).collect::<BTreeMap<_, _>>())
}

type Outcome = Result<(bool, Value)>;

struct Context<'a> {
    table: &'a TemplateTable,
    opts: &'a ReportOptions,
    dim7: Result<ClassTable>,
    dim6: Result<ClassTable>,
}

impl Context<'_> {
    fn template(&self, id: TemplateId) -> Result<Cap> {
        Cap::new(self.table.instantiate_set(id)?)
    }

    fn dim7(&self) -> Result<&ClassTable> {
        self.dim7.as_ref().map_err(Clone::clone)
    }

    fn dim6(&self) -> Result<&ClassTable> {
        self.dim6.as_ref().map_err(Clone::clone)
    }

    fn templates(&self) -> Outcome {
        let basis = generating_basis(TEMPLATE_DIM);
        let mut ok = true;
        let mut rows = Vec::new();
        for id in TemplateId::ALL {
            let row = match self.template(id) {
                Ok(cap) => {
                    let ty = extended_type(&decompose(&cap, Some(&basis))?);
                    let expected = self.table.expected_extended_type(id)?;
                    let good = cap.len() == id.size() && cap.dim() == 7 && ty == expected;
                    ok &= good;
                    json!({"label": id.label(), "size": cap.len(), "dim": cap.dim(),
                           "extended_type": ty.to_string(), "pass": good})
                }
                Err(e) => {
                    ok = false;
                    json!({"label": id.label(), "error": e.to_string(), "pass": false})
                }
            };
            rows.push(row);
        }
        Ok((ok, Value::Array(rows)))
    }

    fn counts(&self, t: &ClassTable, expected: &[(usize, usize)]) -> Outcome {
        let counts = t.counts();
        Ok((counts == expected.iter().copied().collect(), json!({"counts": counts_json(&counts)})))
    }

    fn twelve_complete(&self) -> Outcome {
        let t = self.dim7()?;
        let mut ok = t.row(12).len() == 1;
        let mut witness = Vec::new();
        for e in t.row(12) {
            let qc = quad_closure_1(e.rep.points())?.len();
            let span = gf2::affine_span(e.rep.points())?.len();
            let candidates = extension_candidates(&e.rep).len();
            ok &= qc == 128 && span == 128 && candidates == 0 && e.complete;
            witness.push(json!({"qc1": qc, "aff": span, "candidates": candidates}));
        }
        for id in TemplateId::of_size(12) {
            ok &= is_complete(&self.template(id)?);
        }
        Ok((ok, Value::Array(witness)))
    }

    fn no_thirteen(&self) -> Outcome {
        let t = self.dim7()?;
        let candidates: Vec<Vec<u32>> =
            t.row(12).iter().map(|e| extension_candidates(&e.rep).masks().to_vec()).collect();
        let searched = t.rows.contains_key(&13) && t.row(13).is_empty();
        let analytic = thirteen_cap_inclusion_exclusion();
        let contradiction = analytic.len() == 15 && analytic.iter().all(|c| c.derived != c.forced);
        let ok = searched && !candidates.is_empty() && candidates.iter().all(Vec::is_empty) && contradiction;
        let sample = &analytic[0];
        Ok((
            ok,
            json!({
                "candidates_of_12_caps": candidates,
                "row_13": t.row(13).len(),
                "inclusion_exclusion": {
                    "configurations": analytic.len(),
                    "sums": [sample.singles, sample.pairs, sample.triples, sample.quadruples],
                    "derived": sample.derived,
                    "forced": sample.forced,
                },
            }),
        ))
    }

    fn incomplete(&self, size: usize, witnesses: &[(TemplateId, &[usize])]) -> Outcome {
        let t = self.dim7()?;
        let mut ok = !t.row(size).is_empty() && t.row(size).iter().all(|e| !e.complete);
        let mut rows = Vec::new();
        for &(id, gens) in witnesses {
            let cap = self.template(id)?;
            let z = embed(gens);
            let found = extension_candidates(&cap).contains_mask(z);
            ok &= found && is_cap(&cap.points().with_mask(z)?)?;
            rows.push(json!({"template": id.label(), "point": bit_string(z, 7), "extends": found}));
        }
        Ok((ok, Value::Array(rows)))
    }

    fn pairwise(&self, ids: &[TemplateId]) -> Result<(bool, Vec<Value>)> {
        let mut ok = true;
        let mut maps = Vec::new();
        for (&a, &b) in ids.iter().tuple_combinations() {
            let (ca, cb) = (self.template(a)?, self.template(b)?);
            match find_isomorphism(&ca, &cb)? {
                Some(m) if verify_map(&m, &ca, &cb) => {
                    maps.push(json!({"from": a.label(), "to": b.label(), "map": map_json(&m)}))
                }
                _ => {
                    ok = false;
                    maps.push(json!({"from": a.label(), "to": b.label(), "map": null}));
                }
            }
        }
        Ok((ok, maps))
    }

    fn ten_classes(&self) -> Outcome {
        use TemplateId::*;
        let rows = self.dim7()?.row(10).len();
        let (same, maps) = self.pairwise(&[T10_75_4, T10_55_2])?;
        let distinct = !are_equivalent(&self.template(T10_55_2)?, &self.template(T10_55_3)?)?;
        Ok((
            rows == 2 && same && distinct,
            json!({"classes": rows, "isomorphisms": maps, "T10_55_2~T10_55_3": !distinct}),
        ))
    }

    fn unique(&self, size: usize) -> Outcome {
        let rows = self.dim7()?.row(size).len();
        let ids: Vec<TemplateId> = TemplateId::of_size(size).collect();
        let (ok, maps) = self.pairwise(&ids)?;
        Ok((rows == 1 && ok, json!({"classes": rows, "isomorphisms": maps})))
    }

    fn census(&self) -> Outcome {
        let t = self.dim7()?;
        let has = |size: usize, ty: &str| -> Result<bool> {
            let ty: ExtendedType = ty.parse()?;
            Ok(!t.row(size).is_empty()
                && t.row(size).iter().all(|e| e.census.as_ref().is_some_and(|c| c.contains(&ty))))
        };
        let eleven = has(11, "5-5-5-(3,3,2)")?;
        let twelve = has(12, "5-5-5-5-(2,3,3,3,3,3)")?;
        let tens: Vec<Vec<String>> =
            t.row(10).iter().map(|e| type_strings(e.census.iter().flatten())).sorted().collect();
        let expected: Vec<Vec<String>> = [vec!["5-5-(2)", "7-5-(4)"], vec!["5-5-(3)"]]
            .iter()
            .map(|v| v.iter().map(|s| s.parse::<ExtendedType>().map(|t| t.to_string())).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?
            .into_iter()
            .map(|mut v| {
                v.sort();
                v
            })
            .sorted()
            .collect();
        let all: BTreeMap<String, Vec<Vec<String>>> = t
            .rows
            .iter()
            .map(|(k, row)| (k.to_string(), row.iter().map(|e| type_strings(e.census.iter().flatten())).collect()))
            .collect();
        Ok((eleven && twelve && tens == expected, json!({"censuses": all})))
    }

    fn exchange(&self) -> Outcome {
        // Worked example: a_3 against y = a_1+a_2+a_3+a_4+a_8.
        let basis = generating_basis(TEMPLATE_DIM);
        let masks = [embed(&[1, 2, 3, 4, 5, 6, 7]), embed(&[1, 2, 3, 4, 8]), embed(&[1, 2, 5, 6, 8])];
        let set = gf2::PointSet::from_masks(7, basis.iter().map(|p| p.mask()).chain(masks))?;
        let dec = decompose_set(&set, Some(&basis))?;
        let before = extended_type(&dec);
        let after = extended_type(&exchange_basis(&dec, basis[2], Point::new(masks[1], 7)?)?);
        let example = before == "7-5-5-(4,4,3)".parse()? && after == "5-5-5-(2,3,3)".parse()?;

        let caps: Vec<&Cap> = self.dim7()?.entries().map(|e| &e.rep).filter(|c| c.len() > 8).collect();
        if caps.is_empty() {
            return Ok((false, json!({"error": "no dimension-7 representatives"})));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(self.opts.seed);
        let (mut trials, mut attempts, mut mismatches) = (0usize, 0usize, 0usize);
        while trials < self.opts.exchange_trials {
            attempts += 1;
            let cap = caps.choose(&mut rng).expect("non-empty");
            let chosen: Vec<u32> = cap.masks().iter().copied().choose_multiple(&mut rng, 8);
            if Frame::new(&chosen).is_err() {
                continue;
            }
            let mut order = chosen.clone();
            order.shuffle(&mut rng);
            let basis: Vec<Point> = order.iter().map(|&m| Point::new(m, 7)).collect::<Result<_>>()?;
            let dec = decompose(cap, Some(&basis))?;
            let slot = rng.gen_range(0..dec.dependents().len());
            let x = dec.dependents()[slot];
            let pos = (0..8).filter(|i| x.support >> i & 1 == 1).choose(&mut rng).expect("supports are non-empty");
            let a_bit = 1u32 << pos;
            let others = dec.dependents().iter().filter(|d| d.point != x.point && d.support & a_bit != 0).count();
            if others > 1 {
                continue;
            }
            trials += 1;
            let predicted: Vec<u32> = dec
                .dependents()
                .iter()
                .map(|d| {
                    if d.point == x.point {
                        x.support
                    } else if d.support & a_bit != 0 {
                        (d.support ^ x.support) | a_bit
                    } else {
                        d.support
                    }
                })
                .collect();
            match exchange_basis(&dec, basis[pos], x.point) {
                Ok(new) if new.supports() == predicted => {}
                _ => mismatches += 1,
            }
        }
        Ok((
            example && mismatches == 0,
            json!({"example": {"before": before.to_string(), "after": after.to_string()},
                   "trials": trials, "attempts": attempts, "mismatches": mismatches}),
        ))
    }

    fn lemmas(&self) -> Outcome {
        let mut checked = 0;
        let mut violations = Vec::new();
        for e in self.dim7()?.entries() {
            checked += 1;
            violations.extend(lemma_violations(&e.rep)?);
        }
        Ok((checked > 0 && violations.is_empty(), json!({"representatives": checked, "violations": violations})))
    }

    fn invariance(&self) -> Outcome {
        let mut failures = Vec::new();
        for id in TemplateId::ALL {
            let cap = self.template(id)?;
            let form = canonical_form(&cap)?;
            let complete = is_complete(&cap);
            let census = type_census(&cap)?;
            for k in 0..self.opts.invariance_maps {
                let seed = self.opts.seed.wrapping_add((id as u64) << 32 | k as u64);
                let map = gf2::random_invertible_affine(7, seed)?;
                let image = gf2::apply_affine_map(&map, cap.points())?;
                let good = match Cap::new(image) {
                    Ok(img) => {
                        canonical_form(&img)? == form && is_complete(&img) == complete && type_census(&img)? == census
                    }
                    Err(Error::NotACap(_)) => false,
                    Err(e) => return Err(e),
                };
                if !good {
                    failures.push(json!({"template": id.label(), "seed": seed}));
                }
            }
        }
        Ok((failures.is_empty(), json!({"maps_per_template": self.opts.invariance_maps, "failures": failures})))
    }

    fn higherdim(&self) -> Outcome {
        let (c, c2) = higherdim_pair();
        let basis = generating_basis(8);
        let types = [&c, &c2].map(|s| decompose_set(s, Some(&basis)).map(|d| extended_type(&d)));
        let [t1, t2] = types;
        let (t1, t2) = (t1?, t2?);
        let equivalent = are_equivalent(&Cap::new(c)?, &Cap::new(c2)?)?;
        let ok = t1 == t2 && t1 == "5-5-5-(3,3,3)".parse()? && !equivalent;
        Ok((ok, json!({"types": [t1.to_string(), t2.to_string()], "equivalent": equivalent})))
    }

    fn bounds(&self) -> Outcome {
        let (lo7, hi7) = tait_won_bounds(7);
        let (lo6, hi6) = tait_won_bounds(6);
        let m7 = max_cap_size(7)? as f64;
        let m6 = self.dim6()?.max_size().unwrap_or(0) as f64;
        let ok = (lo7 - 8.0).abs() < 1e-9
            && (hi7 - 17.0).abs() < 1e-9
            && m7 == 12.0
            && lo7 <= m7
            && m7 <= hi7
            && lo6 <= m6
            && m6 <= hi6;
        Ok((ok, json!({"n7": [lo7, hi7], "max7": m7, "n6": [lo6, hi6], "max6": m6})))
    }

    fn toy(&self) -> Outcome {
        let mut ok = true;
        let mut rows = BTreeMap::new();
        for dim in 1..=4 {
            let brute = toy_orbit_counts(dim);
            let search: BTreeMap<usize, usize> =
                classify(dim, 14)?.counts().into_iter().filter(|&(_, c)| c > 0).collect();
            ok &= brute == search;
            rows.insert(dim.to_string(), json!({"brute_force": counts_json(&brute), "classify": counts_json(&search)}));
        }
        Ok((ok, json!(rows)))
    }
}

/// Orbits of full-dimensional caps in `Z_2^dim` under the whole affine
/// group, by size, from an exhaustive scan of all subsets.
fn toy_orbit_counts(dim: usize) -> BTreeMap<usize, usize> {
    let points = 1usize << dim;
    let mut maps: Vec<Vec<usize>> = Vec::new();
    for cols in (0..dim).map(|_| 1..points).multi_cartesian_product() {
        let cols: Vec<u32> = cols.iter().map(|&c| c as u32).collect();
        let Ok(lin) = AffineMap::from_columns(&cols, 0) else { continue };
        if !lin.is_invertible() {
            continue;
        }
        for t in 0..points as u32 {
            maps.push((0..points as u32).map(|x| (lin.apply_mask(x) ^ t) as usize).collect());
        }
    }
    let image =
        |map: &[usize], set: u32| (0..points).filter(|p| set >> p & 1 == 1).fold(0u32, |acc, p| acc | 1 << map[p]);
    let mut seen = vec![false; 1 << points];
    let mut counts = BTreeMap::new();
    for set in 1u32..(1 << points) {
        if seen[set as usize] {
            continue;
        }
        let pts = gf2::PointSet::from_masks(dim, (0..points as u32).filter(|p| set >> p & 1 == 1)).expect("in range");
        if !is_cap(&pts).expect("non-empty") || gf2::affine_dim(&pts).expect("non-empty") != dim {
            continue;
        }
        for m in &maps {
            seen[image(m, set) as usize] = true;
        }
        *counts.entry(pts.len()).or_insert(0) += 1;
    }
    counts
}

pub fn verify_paper() -> VerificationReport {
    verify_paper_with(&TemplateTable::standard(), &ReportOptions::default())
}

/// Runs every claim against `table` in place of the standard templates.
pub fn verify_paper_with(table: &TemplateTable, opts: &ReportOptions) -> VerificationReport {
    use TemplateId::*;
    let ctx = Context { table, opts, dim7: classify(7, 13), dim6: classify(6, 10) };
    let mut claims = Vec::new();
    let mut run = |id: &'static str, criterion: u8, outcome: Outcome| {
        let (status, witness) = match outcome {
            Ok((true, w)) => (Status::Pass, w),
            Ok((false, w)) => (Status::Fail, w),
            Err(e) => (Status::Fail, json!({"error": e.to_string()})),
        };
        claims.push(Claim { id, criterion, status, witness });
    };
    run("templates", 1, ctx.templates());
    run(
        "classification-7",
        2,
        ctx.dim7().and_then(|t| ctx.counts(t, &[(8, 1), (9, 2), (10, 2), (11, 1), (12, 1), (13, 0)])),
    );
    run("classification-6", 3, ctx.dim6().and_then(|t| ctx.counts(t, &[(7, 1), (8, 2), (9, 1), (10, 0)])));
    run("12-complete", 4, ctx.twelve_complete());
    run("no-13-cap", 4, ctx.no_thirteen());
    run("10-incomplete", 4, ctx.incomplete(10, &[(T10_55_2, &[1, 2, 5, 6, 7]), (T10_55_3, &[1, 3, 6, 7, 8])]));
    run("11-incomplete", 4, ctx.incomplete(11, &[(T11_555_332, &[2, 3, 4, 6, 8])]));
    run("10-two-classes", 5, ctx.ten_classes());
    run("11-unique", 5, ctx.unique(11));
    run("12-unique", 5, ctx.unique(12));
    run("census", 6, ctx.census());
    run("exchange", 7, ctx.exchange());
    run("lemmas", 8, ctx.lemmas());
    run("invariance", 9, ctx.invariance());
    run("higherdim", 10, ctx.higherdim());
    run("bounds", 11, ctx.bounds());
    run("toy-oracle", 12, ctx.toy());
    VerificationReport { schema: REPORT_SCHEMA, claims }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn toy_orbits_in_small_dimensions() {
        assert_eq!(toy_orbit_counts(2), BTreeMap::from([(3, 1)]));
        assert_eq!(toy_orbit_counts(3), BTreeMap::from([(4, 1)]));
    }

    #[test]
    fn quick_report_passes() {
        let opts = ReportOptions { exchange_trials: 200, invariance_maps: 3, seed: 7 };
        let report = verify_paper_with(&TemplateTable::standard(), &opts);
        for c in &report.claims {
            assert_eq!(c.status, Status::Pass, "{} {}", c.id, c.witness);
        }
        let criteria: std::collections::BTreeSet<u8> = report.claims.iter().map(|c| c.criterion).collect();
        assert_eq!(criteria, (1..=12).collect());
        assert_eq!(report.claims.iter().map(|c| c.id).unique().count(), report.claims.len());
    }

    #[test]
    fn corrupted_templates_fail() {
        let mut table = TemplateTable::standard();
        table.templates[TemplateId::T11_555_333 as usize].dependents[2] = vec![1, 2, 3, 4, 6];
        let opts = ReportOptions { exchange_trials: 10, invariance_maps: 1, seed: 0 };
        let report = verify_paper_with(&table, &opts);
        assert!(!report.all_pass());
        assert_eq!(report.claim("templates").unwrap().status, Status::Fail);
        assert_eq!(report.claim("classification-7").unwrap().status, Status::Pass);
    }
}
