//! Truncated minimal graded free resolutions, over R and over the ambient
//! polynomial ring.
//!
//! A resolution carries its validity frontier (J, D): twist data and piece
//! computations are complete for internal degrees <= D through homological
//! degree <= J. Downstream consumers never read past the frontier.

use crate::error::{EngineError, Result};
use crate::field::Field;
use crate::module::{
    kernel_step, minimal_image_generators, strip_units, FreeModule, GradedPresentation,
    ModuleMap,
};
use crate::ring::QuotientRing;
use std::collections::BTreeMap;
use std::sync::Arc;

#[derive(Debug)]
pub struct Resolution<F: Field> {
    pub ring: Arc<QuotientRing<F>>,
    /// True when built over the ambient polynomial ring Q.
    pub over_ambient: bool,
    /// F_0, F_1, ..., possibly fewer than j_bound+1 when the resolution
    /// terminates (trailing modules are zero).
    pub modules: Vec<FreeModule>,
    /// maps[j]: F_{j+1} -> F_j.
    pub maps: Vec<ModuleMap<F>>,
    pub j_bound: usize,
    pub d_bound: usize,
}

impl<F: Field> Resolution<F> {
    /// Rank of F_j (zero past termination).
    pub fn rank(&self, j: usize) -> usize {
        self.modules.get(j).map_or(0, FreeModule::rank)
    }

    pub fn module(&self, j: usize) -> Option<&FreeModule> {
        self.modules.get(j).filter(|m| m.rank() > 0)
    }

    /// The differential d_j: F_j -> F_{j-1} for j >= 1, if present.
    pub fn map(&self, j: usize) -> Option<&ModuleMap<F>> {
        j.checked_sub(1).and_then(|k| self.maps.get(k))
    }

    /// True when F_j = 0 for some j <= j_bound (the tail is exactly zero,
    /// not merely truncated).
    pub fn terminated(&self) -> bool {
        self.modules.len() <= self.j_bound
            || self.modules.last().map_or(true, |m| m.rank() == 0)
    }

    /// Length of a terminated resolution.
    pub fn length(&self) -> Option<usize> {
        if !self.terminated() {
            return None;
        }
        Some(
            self.modules
                .iter()
                .rposition(|m| m.rank() > 0)
                .unwrap_or(0),
        )
    }
}

/// Graded Betti numbers beta_{j,i} read off a minimal resolution.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BettiTable {
    /// Row j: multiset of twists of F_j as degree -> multiplicity.
    pub graded: Vec<BTreeMap<usize, usize>>,
    /// Total Betti numbers b_j = rank F_j.
    pub totals: Vec<usize>,
}

pub fn betti_table<F: Field>(res: &Resolution<F>) -> BettiTable {
    let mut graded = Vec::new();
    let mut totals = Vec::new();
    for m in &res.modules {
        let mut row = BTreeMap::new();
        for &a in &m.twists {
            *row.entry(a).or_insert(0) += 1;
        }
        totals.push(m.rank());
        graded.push(row);
    }
    BettiTable { graded, totals }
}

/// Minimal free resolution of `m` over R, correct in internal degrees
/// <= d_bound through homological degree j_bound.
pub fn resolve<F: Field>(
    ring: &Arc<QuotientRing<F>>,
    m: &GradedPresentation<F>,
    j_bound: usize,
    d_bound: usize,
) -> Result<Resolution<F>> {
    let field = ring.field().clone();
    let pres = strip_units(&field, m);
    if let Some(max_gen) = pres.generators.max_twist() {
        if max_gen > d_bound {
            return Err(EngineError::DegreeBoundExceeded {
                step: 0,
                bound: d_bound,
                detail: format!("module generator of degree {max_gen} lies beyond the bound"),
            });
        }
    }
    let mut modules = vec![pres.generators.clone()];
    let mut maps = Vec::new();
    if pres.generators.rank() > 0 && pres.relations.source.rank() > 0 {
        let d1 = minimal_image_generators(ring, &pres.relations, d_bound)?;
        maps.push(d1);
    }
    for j in 1..=j_bound {
        let Some(prev) = maps.get(j - 1) else { break };
        if prev.source.rank() == 0 {
            break;
        }
        modules.push(prev.source.clone());
        if j == j_bound {
            break;
        }
        let next = kernel_step(ring, prev, d_bound);
        if next.source.rank() == 0 {
            break;
        }
        maps.push(next);
    }
    Ok(Resolution {
        ring: Arc::clone(ring),
        over_ambient: ring.descriptor().codim() == 0,
        modules,
        maps,
        j_bound,
        d_bound,
    })
}

/// Finite minimal resolution over the ambient polynomial ring Q. The same
/// presentation matrices are reinterpreted over Q. The length never
/// exceeds the number of variables; that bound is asserted.
pub fn resolve_over_ambient<F: Field>(
    ring: &Arc<QuotientRing<F>>,
    m: &GradedPresentation<F>,
    d_bound: usize,
) -> Result<Resolution<F>> {
    let ambient = QuotientRing::new(ring.descriptor().ambient());
    let v = ambient.descriptor().num_vars();
    let res = resolve(&ambient, m, v + 1, d_bound)?;
    assert!(
        res.terminated() && res.length().unwrap_or(0) <= v,
        "resolution over the polynomial ring must terminate within {v} steps"
    );
    Ok(res)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Rationals;
    use crate::poly::parse_polynomial;

    fn ring(vars: &[&str], relations: &[&str]) -> Arc<QuotientRing<Rationals>> {
        let names: Vec<String> = vars.iter().map(|s| s.to_string()).collect();
        let rels = relations
            .iter()
            .map(|s| parse_polynomial(&Rationals, &names, s).unwrap())
            .collect();
        QuotientRing::new(crate::ring::RingDescriptor::new(Rationals, names, rels).unwrap())
    }

    #[test]
    fn free_module_resolves_to_itself() {
        let r = ring(&["x", "y"], &["x^2", "y^2"]);
        let m = GradedPresentation::ring_module("R", 2);
        let res = resolve(&r, &m, 6, 10).unwrap();
        assert_eq!(res.modules.len(), 1);
        assert_eq!(res.rank(0), 1);
        assert!(res.terminated());
        assert_eq!(res.length(), Some(0));
    }

    #[test]
    fn residue_field_over_dual_numbers_is_periodic() {
        // k over Q[x]/(x^2): F_j = R(-j) for every j
        let r = ring(&["x"], &["x^2"]);
        let k = GradedPresentation::residue_field(&r);
        let res = resolve(&r, &k, 8, 12).unwrap();
        for j in 0..=8 {
            assert_eq!(res.rank(j), 1, "rank at step {j}");
            assert_eq!(res.modules[j].twists, vec![j]);
        }
    }

    #[test]
    fn residue_field_over_two_square_relations() {
        // k over Q[x,y]/(x^2,y^2): total Betti numbers are j+1
        let r = ring(&["x", "y"], &["x^2", "y^2"]);
        let k = GradedPresentation::residue_field(&r);
        let res = resolve(&r, &k, 6, 12).unwrap();
        let betti = betti_table(&res);
        assert_eq!(betti.totals, vec![1, 2, 3, 4, 5, 6, 7]);
    }

    #[test]
    fn differentials_compose_to_zero() {
        let r = ring(&["x", "y"], &["x^2", "y^2"]);
        let k = GradedPresentation::residue_field(&r);
        let res = resolve(&r, &k, 5, 10).unwrap();
        let f = Rationals;
        for j in 1..res.maps.len() {
            let comp = res.maps[j - 1].compose(&f, &res.maps[j]).unwrap();
            assert!(comp.reduces_to_zero(&r), "d{} . d{} != 0", j, j + 1);
        }
    }

    #[test]
    fn resolution_is_minimal() {
        let r = ring(&["x", "y", "u", "v"], &["x*u + y*v"]);
        let names = r.descriptor().vars().to_vec();
        let polys: Vec<_> = ["x", "y"]
            .iter()
            .map(|s| parse_polynomial(&Rationals, &names, s).unwrap())
            .collect();
        let m = GradedPresentation::quotient(&r, "M", &polys).unwrap();
        let res = resolve(&r, &m, 6, 10).unwrap();
        for map in &res.maps {
            assert!(map.entries_in_irrelevant_ideal());
        }
        // the hypersurface syzygies are eventually 2-periodic of rank 2
        assert_eq!(betti_table(&res).totals, vec![1, 2, 2, 2, 2, 2, 2]);
    }

    #[test]
    fn ambient_resolution_of_ambient_ring_is_trivial() {
        let r = ring(&["x"], &["x^2"]);
        let q = GradedPresentation::ring_module("Q", 1);
        let res = resolve_over_ambient(&r, &q, 8).unwrap();
        assert_eq!(res.length(), Some(0));
    }

    #[test]
    fn ambient_resolution_of_principal_quotient() {
        let r = ring(&["x"], &["x^2"]);
        let names = vec!["x".to_string()];
        let x = parse_polynomial(&Rationals, &names, "x").unwrap();
        let m = GradedPresentation::quotient(&r, "Q/x", &[x]).unwrap();
        let res = resolve_over_ambient(&r, &m, 8).unwrap();
        assert_eq!(res.length(), Some(1));
        assert_eq!(res.modules[1].twists, vec![1]);
    }

    #[test]
    fn ambient_koszul_ranks_in_four_variables() {
        let r = ring(&["x", "y", "z", "u"], &["x*y", "z*u"]);
        let k = GradedPresentation::residue_field(&r);
        let res = resolve_over_ambient(&r, &k, 10).unwrap();
        assert_eq!(betti_table(&res).totals, vec![1, 4, 6, 4, 1]);
    }

    #[test]
    fn betti_numbers_stable_under_larger_bounds() {
        let r = ring(&["x", "y"], &["x^2", "y^2"]);
        let k = GradedPresentation::residue_field(&r);
        let res1 = resolve(&r, &k, 5, 8).unwrap();
        let res2 = resolve(&r, &k, 5, 12).unwrap();
        let b1 = betti_table(&res1);
        let b2 = betti_table(&res2);
        // twists at or below the smaller bound agree
        for (row1, row2) in b1.graded.iter().zip(&b2.graded) {
            for (t, mult) in row1 {
                if *t <= 8 {
                    assert_eq!(row2.get(t), Some(mult));
                }
            }
        }
    }

    #[test]
    fn generator_beyond_bound_is_rejected() {
        let r = ring(&["x"], &["x^2"]);
        let m = GradedPresentation::free("shifted", 1, vec![9]);
        match resolve(&r, &m, 3, 5) {
            Err(EngineError::DegreeBoundExceeded { step: 0, .. }) => {}
            other => panic!("expected DegreeBoundExceeded, got {other:?}"),
        }
    }
}
