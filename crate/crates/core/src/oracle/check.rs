//! Cross-checks between the congruence oracles and the presentation.

use num_bigint::BigInt;

use crate::error::{GwError, Result};
use crate::presentation::{even_terms, odd_terms, AbelianGroupInfo, Presentation, Provenance, RelationVector};

use super::classify::classify_small;
use super::congruence::{congruent_bfs, Verdict};
use super::lemma::odd_relation_congruence;
use super::matrix::{RingMatrix, SymMatrix};
use super::orthogonal::orthogonal_group;

/// Largest orbit state space explored by search in relation checks; larger
/// cases use the explicit congruences instead.
pub const RELATION_SEARCH_LIMIT: u128 = 1 << 22;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WitnessMethod {
    Search,
    Explicit,
}

impl WitnessMethod {
    pub fn label(&self) -> &'static str {
        match self {
            WitnessMethod::Search => "search",
            WitnessMethod::Explicit => "explicit",
        }
    }
}

/// One relation together with a verified congruence between its sides.
#[derive(Debug, Clone)]
pub struct RelationWitness {
    pub relation: RelationVector,
    pub provenance: Provenance,
    pub lhs: Vec<u64>,
    pub rhs: Vec<u64>,
    pub witness: RingMatrix,
    pub method: WitnessMethod,
    /// The residue of the witness is orthogonal over `F2`.
    pub residue_orthogonal: bool,
}

#[derive(Debug, Clone, Default)]
pub struct RelationCheckReport {
    pub witnesses: Vec<RelationWitness>,
    pub failures: Vec<String>,
}

impl RelationCheckReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty() && self.witnesses.iter().all(|w| w.residue_orthogonal)
    }
}

fn search_space(spec: crate::ring::RingSpec, n: usize) -> u128 {
    let entries = (n * (n + 1) / 2) as u32;
    (spec.size() as u128).saturating_pow(entries)
}

/// Finds a congruence between the two sides of every relation in the
/// presentation, by orbit search when the state space is small and by the
/// explicit constructions otherwise.
pub fn oracle_relation_check(p: &Presentation, visited_cap: usize) -> Result<RelationCheckReport> {
    let spec = p.spec();
    let classes = p.classes();
    let mut report = RelationCheckReport::default();
    let orthogonal: Vec<_> = (2..=4).map(orthogonal_group).collect::<Result<_>>()?;

    for (rel, prov) in p.iter() {
        let (lhs, rhs, explicit) = match *prov {
            Provenance::Even { a, b, m, .. } => {
                let (n, x, y) = even_terms(&spec, a, b, m)?;
                let w = RingMatrix::from_rows(spec, &[vec![1, n], vec![m, 1]])?;
                (vec![a, b], vec![x, y], w)
            }
            Provenance::Odd { a, b, c, d } => {
                let t = odd_terms(&spec, a, b, c, d)?;
                let w = odd_relation_congruence(classes, [a, b, c, d])?;
                (t.lhs.to_vec(), t.rhs.to_vec(), w)
            }
            Provenance::Hyperbolic => continue,
        };
        let a = SymMatrix::diagonal(spec, &lhs)?;
        let b = SymMatrix::diagonal(spec, &rhs)?;
        let (witness, method) = if search_space(spec, lhs.len()) <= RELATION_SEARCH_LIMIT {
            match congruent_bfs(&a, &b, visited_cap)? {
                Verdict::Congruent { witness, .. } => (witness, WitnessMethod::Search),
                Verdict::NotCongruent { .. } => {
                    report.failures.push(format!(
                        "{}: {} and {} are not congruent",
                        prov.describe(&spec),
                        a,
                        b
                    ));
                    continue;
                }
                Verdict::CapExceeded { .. } => (explicit, WitnessMethod::Explicit),
            }
        } else {
            (explicit, WitnessMethod::Explicit)
        };
        if a.transform(&witness)? != b {
            report.failures.push(format!("{}: witness {} is wrong", prov.describe(&spec), witness));
            continue;
        }
        let residue_orthogonal = orthogonal[witness.dim() - 2].contains(&witness);
        report.witnesses.push(RelationWitness {
            relation: rel.clone(),
            provenance: *prov,
            lhs,
            rhs,
            witness,
            method,
            residue_orthogonal,
        });
    }
    Ok(report)
}

/// Disagreement between the oracle and the presentation on a pair of
/// diagonal forms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mismatch {
    pub left: Vec<u64>,
    pub right: Vec<u64>,
    pub congruent: bool,
    pub equal_in_gw: bool,
}

#[derive(Debug, Clone)]
pub struct RankAgreement {
    pub rank: usize,
    pub matrices: usize,
    pub unimodular: usize,
    pub classes: usize,
    pub diagonal_forms: usize,
    pub pairs: usize,
    pub mismatches: Vec<Mismatch>,
}

#[derive(Debug, Clone)]
pub struct AgreementReport {
    pub ranks: Vec<RankAgreement>,
}

impl AgreementReport {
    pub fn passed(&self) -> bool {
        self.ranks.iter().all(|r| r.mismatches.is_empty())
    }
}

/// For every rank up to `max_rank`, compares congruence of diagonal unit
/// forms (from a full classification) with equality of `sum <d_i>` in `gw`.
pub fn oracle_agreement(gw: &AbelianGroupInfo, max_rank: usize, cap: u64) -> Result<AgreementReport> {
    let classes = gw.classes();
    let spec = classes.spec();
    if max_rank == 0 || max_rank > 4 {
        return Err(GwError::Dimension(format!("rank must be 1..=4, got {max_rank}")));
    }
    let units: Vec<u64> = spec.units_raw().collect();
    let mut ranks = Vec::new();
    for rank in 1..=max_rank {
        let cls = classify_small(spec, rank, cap)?;
        let mut forms: Vec<Vec<u64>> = vec![Vec::new()];
        for _ in 0..rank {
            forms = forms
                .into_iter()
                .flat_map(|f| {
                    units.iter().map(move |&u| {
                        let mut g = f.clone();
                        g.push(u);
                        g
                    })
                })
                .collect();
        }
        let info: Vec<(usize, crate::presentation::GwElement)> = forms
            .iter()
            .map(|f| {
                let mut v = vec![BigInt::from(0); classes.num_classes()];
                for &u in f {
                    v[classes.class_of(u)] += 1;
                }
                let c = cls
                    .class_of_diagonal(f)
                    .ok_or_else(|| GwError::Internal("diagonal unit form is not unimodular".into()))?;
                Ok((c, gw.reduce(&v)))
            })
            .collect::<Result<_>>()?;
        let mut mismatches = Vec::new();
        let mut pairs = 0;
        for i in 0..forms.len() {
            for j in i + 1..forms.len() {
                pairs += 1;
                let congruent = info[i].0 == info[j].0;
                let equal_in_gw = info[i].1 == info[j].1;
                if congruent != equal_in_gw {
                    mismatches.push(Mismatch {
                        left: forms[i].clone(),
                        right: forms[j].clone(),
                        congruent,
                        equal_in_gw,
                    });
                }
            }
        }
        ranks.push(RankAgreement {
            rank,
            matrices: cls.num_matrices(),
            unimodular: cls.num_unimodular(),
            classes: cls.num_classes(),
            diagonal_forms: forms.len(),
            pairs,
            mismatches,
        });
    }
    Ok(AgreementReport { ranks })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presentation::{EnumerationOptions, GwRing};
    use crate::ring::RingSpec;

    #[test]
    fn relations_are_sound_on_small_rings() {
        for spec in [RingSpec::z2k(2), RingSpec::z2k(3), RingSpec::trunc2(3)] {
            let p = Presentation::build(spec, &EnumerationOptions::default()).unwrap();
            let r = oracle_relation_check(&p, 1 << 24).unwrap();
            assert!(r.passed(), "{spec}: {:?}", r.failures);
            assert_eq!(r.witnesses.len(), p.relations().len());
        }
    }

    #[test]
    fn agreement_small() {
        let r = GwRing::compute(RingSpec::z2k(2), &EnumerationOptions::default()).unwrap();
        let a = oracle_agreement(r.gw(), 3, 1 << 22).unwrap();
        assert!(a.passed());
    }
}
