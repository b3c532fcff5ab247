//! The graded ring R = Q/(f_1, ..., f_c), realized degree by degree.
//!
//! No Groebner bases: a degree-d piece of R is the cokernel of the
//! multiplication maps (+)_l Q_{d - d_l} -> Q_d, computed once by exact
//! elimination and memoized. Everything downstream works in the resulting
//! monomial-complement bases.

use crate::field::Field;
use crate::matrix::{DenseMatrix, Echelon};
use crate::poly::{monomial_basis, Monomial, Polynomial};
use std::collections::HashMap;
use std::sync::{Arc, RwLock};

/// Plain data for R = k[x_0..x_{v-1}]/(f_1..f_c): the field, the variable
/// names (all of degree one), and the homogeneous relations.
#[derive(Clone, Debug)]
pub struct RingDescriptor<F: Field> {
    field: F,
    vars: Vec<String>,
    relations: Vec<Polynomial<F>>,
    relation_degrees: Vec<usize>,
}

impl<F: Field> RingDescriptor<F> {
    pub fn new(
        field: F,
        vars: Vec<String>,
        relations: Vec<Polynomial<F>>,
    ) -> Result<Self, String> {
        if vars.is_empty() {
            return Err("a ring needs at least one variable".into());
        }
        for i in 0..vars.len() {
            for j in i + 1..vars.len() {
                if vars[i] == vars[j] {
                    return Err(format!("duplicate variable name '{}'", vars[i]));
                }
            }
        }
        let mut relation_degrees = Vec::with_capacity(relations.len());
        for (l, f) in relations.iter().enumerate() {
            if f.nvars() != vars.len() {
                return Err(format!("relation {} has wrong variable count", l + 1));
            }
            match f.degree_if_homogeneous() {
                Some(d) if d >= 1 => relation_degrees.push(d),
                Some(_) => {
                    return Err(format!(
                        "relation {} is a nonzero constant; relations must lie in the irrelevant ideal",
                        l + 1
                    ))
                }
                None => {
                    return Err(format!(
                        "relation {} must be homogeneous of positive degree",
                        l + 1
                    ))
                }
            }
        }
        Ok(RingDescriptor {
            field,
            vars,
            relations,
            relation_degrees,
        })
    }

    pub fn field(&self) -> &F {
        &self.field
    }
    pub fn vars(&self) -> &[String] {
        &self.vars
    }
    pub fn relations(&self) -> &[Polynomial<F>] {
        &self.relations
    }
    pub fn relation_degrees(&self) -> &[usize] {
        &self.relation_degrees
    }
    /// Number of variables, `v = n + c`.
    pub fn num_vars(&self) -> usize {
        self.vars.len()
    }
    /// Codimension `c`.
    pub fn codim(&self) -> usize {
        self.relations.len()
    }
    pub fn max_relation_degree(&self) -> usize {
        self.relation_degrees.iter().copied().max().unwrap_or(1)
    }

    /// The ambient polynomial ring Q (same variables, no relations).
    pub fn ambient(&self) -> RingDescriptor<F> {
        RingDescriptor {
            field: self.field.clone(),
            vars: self.vars.clone(),
            relations: Vec::new(),
            relation_degrees: Vec::new(),
        }
    }
}

/// A k-basis of R_d as a complement of the ideal piece inside Q_d, plus the
/// projection of arbitrary degree-d polynomials onto that basis.
#[derive(Debug)]
pub struct QuotientPiece<F: Field> {
    pub degree: usize,
    /// Basis monomials of R_d, in the global monomial order.
    pub basis: Vec<Monomial>,
    /// All monomials of Q_d, positions matching `reducer` coordinates.
    ambient: Vec<Monomial>,
    ambient_index: HashMap<Monomial, usize>,
    /// Echelon rows spanning the ideal piece (f_1..f_c) ∩ Q_d.
    reducer: Echelon<F>,
    /// Map ambient position -> basis position for non-pivot columns.
    basis_position: Vec<Option<usize>>,
}

impl<F: Field> QuotientPiece<F> {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient.len()
    }

    /// Coordinates of a homogeneous degree-`degree` polynomial in the basis
    /// of R_d. This is the quotient projection; it kills exactly the ideal.
    pub fn reduce(&self, field: &F, p: &Polynomial<F>) -> Vec<F::Elem> {
        let mut ambient = vec![field.zero(); self.ambient.len()];
        for (m, c) in p.terms() {
            debug_assert_eq!(m.degree(), self.degree, "degree mismatch in reduce");
            let idx = *self
                .ambient_index
                .get(m)
                .expect("monomial outside ambient basis");
            ambient[idx] = c.clone();
        }
        self.reduce_ambient(field, ambient)
    }

    /// Same as [`reduce`], starting from ambient coordinates.
    pub fn reduce_ambient(&self, field: &F, mut ambient: Vec<F::Elem>) -> Vec<F::Elem> {
        self.reducer.reduce(&mut ambient);
        let mut out = vec![field.zero(); self.basis.len()];
        for (i, slot) in self.basis_position.iter().enumerate() {
            if let Some(b) = slot {
                out[*b] = std::mem::replace(&mut ambient[i], field.zero());
            } else {
                debug_assert!(field.is_zero(&ambient[i]));
            }
        }
        out
    }
}

/// R together with its memoized degreewise data. Cheap to share via `Arc`;
/// the caches tolerate concurrent readers with at-most-once insertion.
#[derive(Debug)]
pub struct QuotientRing<F: Field> {
    desc: RingDescriptor<F>,
    pieces: RwLock<HashMap<usize, Arc<QuotientPiece<F>>>>,
    var_actions: RwLock<HashMap<(usize, usize), Arc<DenseMatrix<F>>>>,
}

impl<F: Field> QuotientRing<F> {
    pub fn new(desc: RingDescriptor<F>) -> Arc<Self> {
        Arc::new(QuotientRing {
            desc,
            pieces: RwLock::new(HashMap::new()),
            var_actions: RwLock::new(HashMap::new()),
        })
    }

    pub fn descriptor(&self) -> &RingDescriptor<F> {
        &self.desc
    }

    pub fn field(&self) -> &F {
        self.desc.field()
    }

    /// dim_k R_d.
    pub fn dim(&self, d: i64) -> usize {
        if d < 0 {
            return 0;
        }
        self.piece(d as usize).dim()
    }

    /// The memoized degree-`d` piece of R.
    pub fn piece(&self, d: usize) -> Arc<QuotientPiece<F>> {
        if let Some(p) = self.pieces.read().unwrap().get(&d) {
            return Arc::clone(p);
        }
        let computed = Arc::new(self.compute_piece(d));
        let mut w = self.pieces.write().unwrap();
        Arc::clone(w.entry(d).or_insert(computed))
    }

    fn compute_piece(&self, d: usize) -> QuotientPiece<F> {
        let field = self.desc.field().clone();
        let v = self.desc.num_vars();
        let ambient = monomial_basis(v, d);
        let ambient_index: HashMap<Monomial, usize> = ambient
            .iter()
            .cloned()
            .enumerate()
            .map(|(i, m)| (m, i))
            .collect();
        let mut reducer = Echelon::new(field.clone(), ambient.len());
        for (l, f) in self.desc.relations().iter().enumerate() {
            let dl = self.desc.relation_degrees()[l];
            if dl > d {
                continue;
            }
            for u in monomial_basis(v, d - dl) {
                let prod = f.mul_monomial(&u);
                let mut row = vec![field.zero(); ambient.len()];
                for (m, c) in prod.terms() {
                    row[ambient_index[m]] = c.clone();
                }
                reducer.absorb(row);
                if reducer.is_full() {
                    break;
                }
            }
            if reducer.is_full() {
                break;
            }
        }
        let mut pivot = vec![false; ambient.len()];
        for p in reducer.pivots() {
            pivot[p] = true;
        }
        let mut basis = Vec::new();
        let mut basis_position = vec![None; ambient.len()];
        for (i, m) in ambient.iter().enumerate() {
            if !pivot[i] {
                basis_position[i] = Some(basis.len());
                basis.push(m.clone());
            }
        }
        QuotientPiece {
            degree: d,
            basis,
            ambient,
            ambient_index,
            reducer,
            basis_position,
        }
    }

    /// Matrix of multiplication by variable `i` from R_d to R_{d+1},
    /// memoized (these are reassembled constantly during syzygy work).
    pub fn var_action(&self, i: usize, d: usize) -> Arc<DenseMatrix<F>> {
        let key = (i, d);
        if let Some(m) = self.var_actions.read().unwrap().get(&key) {
            return Arc::clone(m);
        }
        let m = Arc::new(self.monomial_action(&Monomial::var(self.desc.num_vars(), i), d));
        let mut w = self.var_actions.write().unwrap();
        Arc::clone(w.entry(key).or_insert(m))
    }

    /// Matrix of multiplication by a monomial from R_d to R_{d + deg m}.
    pub fn monomial_action(&self, m: &Monomial, d: usize) -> DenseMatrix<F> {
        let field = self.field().clone();
        let src = self.piece(d);
        let dst = self.piece(d + m.degree());
        let mut out = DenseMatrix::zeros(field.clone(), dst.dim(), src.dim());
        for (q, u) in src.basis.iter().enumerate() {
            let w = u.mul(m);
            let mut ambient = vec![field.zero(); dst.ambient_dim()];
            ambient[dst.ambient_index[&w]] = field.one();
            let col = dst.reduce_ambient(&field, ambient);
            for (r, e) in col.into_iter().enumerate() {
                if !field.is_zero(&e) {
                    *out.at_mut(r, q) = e;
                }
            }
        }
        out
    }

    /// Matrix of multiplication by a homogeneous polynomial `g` from R_d to
    /// R_{d + deg g}.
    pub fn mult_map(&self, g: &Polynomial<F>, d: usize) -> DenseMatrix<F> {
        let field = self.field().clone();
        let src = self.piece(d);
        let e = g.degree_if_homogeneous().unwrap_or(0);
        if g.is_zero() {
            return DenseMatrix::zeros(field, self.piece(d).dim(), src.dim());
        }
        let dst = self.piece(d + e);
        let mut out = DenseMatrix::zeros(field.clone(), dst.dim(), src.dim());
        for (q, u) in src.basis.iter().enumerate() {
            let prod = g.mul_monomial(u);
            let col = dst.reduce(&field, &prod);
            for (r, elem) in col.into_iter().enumerate() {
                if !field.is_zero(&elem) {
                    *out.at_mut(r, q) = elem;
                }
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{Field, Rationals};
    use crate::poly::parse_polynomial;

    pub(crate) fn ring(
        vars: &[&str],
        relations: &[&str],
    ) -> Arc<QuotientRing<Rationals>> {
        let names: Vec<String> = vars.iter().map(|s| s.to_string()).collect();
        let rels = relations
            .iter()
            .map(|s| parse_polynomial(&Rationals, &names, s).unwrap())
            .collect();
        QuotientRing::new(RingDescriptor::new(Rationals, names, rels).unwrap())
    }

    #[test]
    fn truncated_polynomial_ring_in_one_variable() {
        let r = ring(&["x"], &["x^2"]);
        assert_eq!(r.dim(0), 1);
        assert_eq!(r.dim(1), 1);
        assert_eq!(r.piece(1).basis.len(), 1);
        assert_eq!(r.dim(2), 0);
        assert_eq!(r.dim(5), 0);
    }

    #[test]
    fn hypersurface_quadric_dimensions() {
        // (1+t)/(1-t)^3 = 1 + 4t + 9t^2 + 16t^3 + ...
        let r = ring(&["x", "y", "u", "v"], &["x*u + y*v"]);
        assert_eq!(r.dim(0), 1);
        assert_eq!(r.dim(1), 4);
        assert_eq!(r.dim(2), 9);
        assert_eq!(r.dim(3), 16);
    }

    #[test]
    fn artinian_square_relations() {
        let r = ring(&["x", "y"], &["x^2", "y^2"]);
        assert_eq!(r.dim(2), 1);
        let piece = r.piece(2);
        assert_eq!(piece.basis, vec![Monomial::new(vec![1, 1])]);
        assert_eq!(r.dim(3), 0);
    }

    #[test]
    fn reduction_kills_exactly_the_ideal_piece() {
        let r = ring(&["x", "y", "u", "v"], &["x*u + y*v"]);
        let f = Rationals;
        let names: Vec<String> = ["x", "y", "u", "v"].iter().map(|s| s.to_string()).collect();
        let rel = parse_polynomial(&f, &names, "x*u + y*v").unwrap();
        let coords = r.piece(2).reduce(&f, &rel);
        assert!(coords.iter().all(|e| f.is_zero(e)));
        let xu = parse_polynomial(&f, &names, "x*u").unwrap();
        let coords = r.piece(2).reduce(&f, &xu);
        assert!(!coords.iter().all(|e| f.is_zero(e)));
    }

    #[test]
    fn mult_map_by_one_is_identity() {
        let r = ring(&["x", "y"], &["x^2", "y^2"]);
        let one = Polynomial::one(&Rationals, 2);
        let m = r.mult_map(&one, 1);
        assert_eq!(m, DenseMatrix::identity(Rationals, 2));
    }

    #[test]
    fn mult_map_into_zero_piece() {
        let r = ring(&["x"], &["x^2"]);
        let f = Rationals;
        let names = vec!["x".to_string()];
        let x = parse_polynomial(&f, &names, "x").unwrap();
        let m = r.mult_map(&x, 1);
        assert_eq!(m.rows(), 0);
        assert_eq!(m.cols(), 1);
    }

    #[test]
    fn mult_map_hand_example() {
        // R = Q[x,y]/(x^2,y^2): R_1 = {x, y} -> R_2 = {xy}, mult by x is [0 1]
        let r = ring(&["x", "y"], &["x^2", "y^2"]);
        let f = Rationals;
        let names = vec!["x".to_string(), "y".to_string()];
        let x = parse_polynomial(&f, &names, "x").unwrap();
        let m = r.mult_map(&x, 1);
        assert_eq!((m.rows(), m.cols()), (1, 2));
        assert!(f.is_zero(m.at(0, 0)));
        assert!(f.is_one(m.at(0, 1)));
    }

    #[test]
    fn relations_act_as_zero() {
        let r = ring(&["x", "y", "u", "v"], &["x*u + y*v"]);
        let rel = r.descriptor().relations()[0].clone();
        for d in 0..4 {
            assert!(r.mult_map(&rel, d).is_zero(), "f must act as zero on R_{d}");
        }
    }

    #[test]
    fn mult_map_composition_law() {
        use rand::{Rng, SeedableRng};
        let r = ring(&["x", "y", "z"], &["x*y + z^2"]);
        let f = Rationals;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        let rand_homog = |rng: &mut rand_chacha::ChaCha8Rng, deg: usize| {
            let mut q = Polynomial::zero(3);
            for m in monomial_basis(3, deg) {
                let c: i64 = rng.gen_range(-3..=3);
                q = q.add(&f, &Polynomial::monomial(&f, m, f.from_i64(c)));
            }
            q
        };
        for _ in 0..10 {
            let g = rand_homog(&mut rng, 1);
            let h = rand_homog(&mut rng, 2);
            let d = rng.gen_range(0..3);
            let gh = g.mul(&f, &h);
            let lhs = r.mult_map(&gh, d);
            let rhs = r.mult_map(&g, d + 2).mul(&r.mult_map(&h, d));
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn pieces_are_deterministic_across_rings() {
        let r1 = ring(&["x", "y", "u", "v"], &["x*u + y*v"]);
        let r2 = ring(&["x", "y", "u", "v"], &["x*u + y*v"]);
        for d in 0..5 {
            assert_eq!(r1.piece(d).basis, r2.piece(d).basis);
        }
    }
}
