//! Presentation of `GW(R)` by square-class generators and relations, its
//! reduction to invariant factors, and the Witt quotient.

pub mod group;
pub mod relations;
pub mod tower;

use std::sync::Arc;

use num_bigint::BigInt;

use crate::error::{GwError, Result};
use crate::ring::{Family, RingSpec};

pub use group::{default_candidates, AbelianGroupInfo, BasisCandidate, GwElement};
pub use relations::{
    enumerate_even_relations, enumerate_odd_relations, even_terms, odd_terms, EnumerationOptions, FamilyReport,
    OddTerms, Presentation, Provenance, RelationFamily, RelationVector, SampleInfo, DEFAULT_ENUMERATION_CAP,
};
pub use tower::{induced_map, tower_check, InducedMap, TowerStep};

/// `GW(R)` together with its Witt quotient and the presentation both came
/// from.
#[derive(Debug, Clone)]
pub struct GwRing {
    presentation: Presentation,
    gw: AbelianGroupInfo,
    witt: AbelianGroupInfo,
}

impl GwRing {
    pub fn compute(spec: RingSpec, opts: &EnumerationOptions) -> Result<Self> {
        Self::from_presentation(Presentation::build(spec, opts)?)
    }

    pub fn from_presentation(presentation: Presentation) -> Result<Self> {
        let classes = Arc::new(presentation.classes().clone());
        let rows: Vec<Vec<BigInt>> = presentation
            .relations()
            .iter()
            .map(|r| r.coords().iter().map(|&x| BigInt::from(x)).collect())
            .collect();
        let gw = AbelianGroupInfo::from_relations(classes, &rows)?.mark_ring();
        let witt = gw.quotient_by_elements(&[hyperbolic(&gw)])?;
        if !witt.is_ring() {
            return Err(GwError::Internal("hyperbolic forms do not span an ideal".into()));
        }
        Ok(GwRing { presentation, gw, witt })
    }

    pub fn spec(&self) -> RingSpec {
        self.presentation.spec()
    }

    pub fn presentation(&self) -> &Presentation {
        &self.presentation
    }

    pub fn gw(&self) -> &AbelianGroupInfo {
        &self.gw
    }

    pub fn witt(&self) -> &AbelianGroupInfo {
        &self.witt
    }

    pub fn sampled(&self) -> Option<SampleInfo> {
        self.presentation.sampled()
    }

    /// `<1> + <-1>` in `GW(R)`.
    pub fn hyperbolic(&self) -> GwElement {
        hyperbolic(&self.gw)
    }

    /// The image of the symmetrisation map in `W(R)`, `3<1> - <3>`. Only
    /// meaningful for `Z/2^n`.
    pub fn symmetrisation(&self) -> Result<GwElement> {
        let spec = self.spec();
        if spec.family() != Family::Z2k {
            return Err(GwError::Precondition(format!("symmetrisation element is defined for z2k rings, not {spec}")));
        }
        let three = self.gw.classes().class_of(spec.reduce(3));
        let mut v = vec![BigInt::from(0); self.gw.classes().num_classes()];
        v[0] += 3;
        v[three] -= 1;
        Ok(self.witt.reduce(&v))
    }

    /// `W(R) / (3<1> - <3>)`.
    pub fn symmetrisation_cokernel(&self) -> Result<AbelianGroupInfo> {
        let s = self.symmetrisation()?;
        self.witt.quotient_by_elements(&[s])
    }
}

fn hyperbolic(gw: &AbelianGroupInfo) -> GwElement {
    let c = gw.classes();
    let mut v = vec![BigInt::from(0); c.num_classes()];
    v[0] += 1;
    v[c.minus_one()] += 1;
    gw.reduce(&v)
}

/// `GW(R)` with default enumeration options.
pub fn gw_group(spec: RingSpec) -> Result<AbelianGroupInfo> {
    Ok(GwRing::compute(spec, &EnumerationOptions::default())?.gw)
}

/// `W(R) = GW(R) / (<1> + <-1>)` with default enumeration options.
pub fn witt_group(spec: RingSpec) -> Result<AbelianGroupInfo> {
    Ok(GwRing::compute(spec, &EnumerationOptions::default())?.witt)
}
