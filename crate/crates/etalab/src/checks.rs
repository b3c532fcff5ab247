//! Hypothesis checks on input rings: the regular-sequence property
//! (against the Hilbert series product formula) and the isolated
//! singularity condition (via the Jacobian minor ideal, degree by degree).

use crate::field::{Field, FieldSpec};
use crate::matrix::Echelon;
use crate::poly::{monomial_basis, Polynomial};
use crate::ring::QuotientRing;
use num::BigInt;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RegularSequenceVerdict {
    VerifiedToDegree(usize),
    FailedAtDegree(usize),
}

impl RegularSequenceVerdict {
    pub fn verified(&self) -> bool {
        matches!(self, RegularSequenceVerdict::VerifiedToDegree(_))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum IsolatedVerdict {
    /// The Jacobian quotient vanishes from this degree on.
    Yes { from_degree: usize },
    /// Dimensions stayed positive through the bound; degreewise linear
    /// algebra cannot certify positive-dimensionality, so this is only
    /// "no within the bound".
    NoWithinBound { bound: usize },
    Skipped,
}

impl IsolatedVerdict {
    pub fn is_yes(&self) -> bool {
        matches!(self, IsolatedVerdict::Yes { .. })
    }
}

#[derive(Clone, Debug)]
pub struct RingCertificate {
    pub regular_sequence: RegularSequenceVerdict,
    pub isolated_singularity: IsolatedVerdict,
    /// deg X = d_1 ... d_c.
    pub degree_product: u64,
    pub codim: usize,
    pub num_vars: usize,
    pub warnings: Vec<String>,
}

/// Expected dim R_e under the product formula
/// prod_l (1 - t^{d_l}) / (1 - t)^v, as exact integers up to `bound`.
fn product_formula_coeffs(degrees: &[usize], v: usize, bound: usize) -> Vec<i64> {
    // numerator prod (1 - t^{d_l})
    let mut num = vec![BigInt::from(0); bound + 1];
    num[0] = BigInt::from(1);
    for &d in degrees {
        let mut next = num.clone();
        for i in d..=bound {
            let sub = num[i - d].clone();
            next[i] -= sub;
        }
        num = next;
    }
    // multiply by 1/(1-t)^v = sum C(e+v-1, v-1) t^e via repeated prefix sums
    let mut seq = num;
    for _ in 0..v {
        for i in 1..=bound {
            let prev = seq[i - 1].clone();
            seq[i] += prev;
        }
    }
    seq.into_iter()
        .map(|b| i64::try_from(&b).expect("coefficient fits i64"))
        .collect()
}

/// Compare computed quotient dimensions against the product formula. Any
/// mismatch certifies the relations are not a regular sequence at that
/// degree (a regular sequence is exactly when equality holds everywhere).
pub fn regular_sequence_check<F: Field>(
    ring: &QuotientRing<F>,
    bound: usize,
) -> RegularSequenceVerdict {
    let desc = ring.descriptor();
    let expected = product_formula_coeffs(
        desc.relation_degrees(),
        desc.num_vars(),
        bound,
    );
    for e in 0..=bound {
        let actual = ring.dim(e as i64) as i64;
        // a quotient by c forms is at least as big as the regular case
        let predicted = expected[e].max(0);
        if actual != predicted {
            return RegularSequenceVerdict::FailedAtDegree(e);
        }
    }
    RegularSequenceVerdict::VerifiedToDegree(bound)
}

/// All c-subsets of 0..n in lexicographic order.
fn subsets(n: usize, c: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(out: &mut Vec<Vec<usize>>, cur: &mut Vec<usize>, start: usize, n: usize, c: usize) {
        if cur.len() == c {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(out, cur, i + 1, n, c);
            cur.pop();
        }
    }
    rec(&mut out, &mut cur, 0, n, c);
    out
}

/// Determinant of a small polynomial matrix by cofactor expansion along
/// the first row (c <= 3 in practice).
fn poly_det<F: Field>(field: &F, m: &[Vec<Polynomial<F>>]) -> Polynomial<F> {
    let n = m.len();
    let nvars = m[0][0].nvars();
    if n == 1 {
        return m[0][0].clone();
    }
    let mut acc = Polynomial::zero(nvars);
    for (j, top) in m[0].iter().enumerate() {
        if top.is_zero() {
            continue;
        }
        let minor: Vec<Vec<Polynomial<F>>> = (1..n)
            .map(|r| {
                (0..n)
                    .filter(|&c| c != j)
                    .map(|c| m[r][c].clone())
                    .collect()
            })
            .collect();
        let sub = poly_det(field, &minor);
        let term = top.mul(field, &sub);
        acc = if j % 2 == 0 {
            acc.add(field, &term)
        } else {
            acc.sub(field, &term)
        };
    }
    acc
}

/// The relations together with all c x c minors of the Jacobian matrix
/// (d f_l / d x_i).
pub fn jacobian_ideal_generators<F: Field>(ring: &QuotientRing<F>) -> Vec<Polynomial<F>> {
    let desc = ring.descriptor();
    let field = desc.field();
    let c = desc.codim();
    let v = desc.num_vars();
    let mut gens: Vec<Polynomial<F>> = desc.relations().to_vec();
    if c == 0 {
        return gens;
    }
    let jac: Vec<Vec<Polynomial<F>>> = desc
        .relations()
        .iter()
        .map(|f| (0..v).map(|i| f.partial_derivative(field, i)).collect())
        .collect();
    for cols in subsets(v, c) {
        let sub: Vec<Vec<Polynomial<F>>> = (0..c)
            .map(|r| cols.iter().map(|&i| jac[r][i].clone()).collect())
            .collect();
        let det = poly_det(field, &sub);
        if !det.is_zero() {
            gens.push(det);
        }
    }
    gens
}

/// dim (Q/J)_e for the ideal generated by homogeneous `gens`, degree by
/// degree.
fn ideal_quotient_dim<F: Field>(
    ring: &QuotientRing<F>,
    gens: &[(usize, &Polynomial<F>)],
    e: usize,
) -> usize {
    let field = ring.field().clone();
    let v = ring.descriptor().num_vars();
    let ambient = monomial_basis(v, e);
    let index: std::collections::HashMap<_, _> = ambient
        .iter()
        .cloned()
        .enumerate()
        .map(|(i, m)| (m, i))
        .collect();
    let mut span = Echelon::new(field.clone(), ambient.len());
    'outer: for &(dg, g) in gens {
        if dg > e {
            continue;
        }
        for u in monomial_basis(v, e - dg) {
            let prod = g.mul_monomial(&u);
            let mut row = vec![field.zero(); ambient.len()];
            for (m, c) in prod.terms() {
                row[index[m]] = c.clone();
            }
            span.absorb(row);
            if span.is_full() {
                break 'outer;
            }
        }
    }
    ambient.len() - span.dim()
}

/// Degreewise isolated-singularity test: if the quotient by the Jacobian
/// ideal vanishes in some degree it vanishes forever (standard grading,
/// generators in degree one), so the singular locus is at most the
/// irrelevant ideal. The verdict also confirms the next degree.
pub fn isolated_singularity_check<F: Field>(
    ring: &QuotientRing<F>,
    bound: usize,
) -> IsolatedVerdict {
    let gens_owned = jacobian_ideal_generators(ring);
    let gens: Vec<(usize, &Polynomial<F>)> = gens_owned
        .iter()
        .filter_map(|g| g.degree_if_homogeneous().map(|d| (d, g)))
        .collect();
    for e in 1..=bound {
        if ideal_quotient_dim(ring, &gens, e) == 0 {
            // monotone: once zero, the next degree must also be zero
            assert_eq!(
                ideal_quotient_dim(ring, &gens, e + 1),
                0,
                "a vanished graded quotient stays vanished"
            );
            return IsolatedVerdict::Yes { from_degree: e };
        }
    }
    IsolatedVerdict::NoWithinBound { bound }
}

/// Run both hypothesis checks and collect warnings.
pub fn certify<F: Field>(
    ring: &QuotientRing<F>,
    bound: usize,
    skip_isolated: bool,
) -> RingCertificate {
    let desc = ring.descriptor();
    let mut warnings = Vec::new();
    if let FieldSpec::PrimeField(p) = desc.field().spec() {
        let small = 4 * desc.max_relation_degree() as u64 * desc.num_vars() as u64;
        if p <= small.max(13) {
            warnings.push(format!(
                "Jacobian criterion applied over F_{p}; small characteristic may misjudge smoothness"
            ));
        }
    }
    let regular_sequence = regular_sequence_check(ring, bound);
    let isolated_singularity = if skip_isolated || !regular_sequence.verified() {
        IsolatedVerdict::Skipped
    } else {
        isolated_singularity_check(ring, bound)
    };
    let degree_product = desc
        .relation_degrees()
        .iter()
        .map(|&d| d as u64)
        .product();
    RingCertificate {
        regular_sequence,
        isolated_singularity,
        degree_product,
        codim: desc.codim(),
        num_vars: desc.num_vars(),
        warnings,
    }
}

/// Expected quotient dimensions for test rings, exposed for the regular
/// sequence property tests.
pub fn expected_regular_dims(degrees: &[usize], v: usize, bound: usize) -> Vec<i64> {
    product_formula_coeffs(degrees, v, bound)
}
