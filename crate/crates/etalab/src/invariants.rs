//! From the Tor table to the numerical invariants: Hilbert series and
//! their rational forms, even/odd length polynomials, the eta and theta
//! invariants, the Koszul identity residual, generating functions in two
//! variables, and the Euler-characteristic consistency check on Hilbert
//! series.

use crate::error::{EngineError, Result};
use crate::field::Field;
use crate::module::ModuleRealization;
use crate::ratpoly::{finite_difference, interpolate, RatPoly};
use crate::ring::RingDescriptor;
use crate::tor::TorTable;
use num::{BigInt, BigRational, One, Signed, Zero};

/// Exact Hilbert data of a graded module: coefficients up to the degree
/// bound and the rational form e_T(t) / (1-t)^dim.
#[derive(Clone, Debug)]
pub struct HilbertSeries {
    pub coeffs: Vec<usize>,
    pub numerator: RatPoly,
    pub pole_order: usize,
    pub degree_bound: usize,
}

fn int(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// Recover a rational form from a coefficient sequence by stripping powers
/// of (1-t) until a polynomial supported below `d_bound - margin` remains.
fn rational_form(
    coeffs: &[usize],
    max_pole: usize,
    margin: usize,
    d_bound: usize,
) -> Result<(RatPoly, usize)> {
    let mut seq: Vec<BigRational> = coeffs.iter().map(|&c| int(c as i64)).collect();
    for pole in 0..=max_pole {
        let cutoff = d_bound.saturating_sub(margin);
        if seq.iter().enumerate().all(|(i, c)| i <= cutoff || c.is_zero()) {
            let poly = RatPoly::from_coeffs(seq);
            debug_assert!(
                poly.is_zero() || !poly.eval_at_one().is_zero(),
                "minimal pole order must leave a numerator nonzero at 1"
            );
            return Ok((poly, pole));
        }
        // multiply by (1 - t): g_i = h_i - h_{i-1}
        let mut next = Vec::with_capacity(seq.len());
        let mut prev = BigRational::zero();
        for c in &seq {
            next.push(c - &prev);
            prev = c.clone();
        }
        seq = next;
    }
    Err(EngineError::NotPolynomialWithinBound(d_bound))
}

/// Hilbert series of a presented module, exact through `d_bound`.
pub fn hilbert_series<F: Field>(
    real: &ModuleRealization<F>,
    d_bound: usize,
) -> Result<HilbertSeries> {
    let coeffs: Vec<usize> = (0..=d_bound).map(|d| real.dim(d as i64)).collect();
    let desc = real.ring().descriptor();
    let margin = desc.max_relation_degree() + 1 + real.presentation().max_generator_degree();
    let (numerator, pole_order) =
        rational_form(&coeffs, desc.num_vars(), margin, d_bound)?;
    Ok(HilbertSeries {
        coeffs,
        numerator,
        pole_order,
        degree_bound: d_bound,
    })
}

/// e_R(t) = prod_l (1 + t + ... + t^{d_l - 1}); its value at 1 is the
/// degree d_1 ... d_c.
pub fn multiplicity_polynomial<F: Field>(desc: &RingDescriptor<F>) -> RatPoly {
    let mut acc = RatPoly::one();
    for &d in desc.relation_degrees() {
        let ones = RatPoly::from_coeffs(vec![BigRational::one(); d]);
        acc = acc.mul(&ones);
    }
    acc
}

/// Elementary symmetric functions s_0..s_c in the symbols t^{d_l}.
pub fn elementary_symmetric(degrees: &[usize]) -> Vec<RatPoly> {
    let mut sym = vec![RatPoly::zero(); degrees.len() + 1];
    sym[0] = RatPoly::one();
    for &d in degrees {
        let td = RatPoly::monomial(BigRational::one(), d);
        for k in (1..sym.len()).rev() {
            let add = sym[k - 1].mul(&td);
            sym[k] = sym[k].add(&add);
        }
    }
    sym
}

fn hilbert_row_poly(dims: &[Vec<usize>], j: i64) -> RatPoly {
    if j < 0 {
        return RatPoly::zero();
    }
    match dims.get(j as usize) {
        Some(row) => RatPoly::from_coeffs(row.iter().map(|&c| int(c as i64)).collect()),
        None => RatPoly::zero(),
    }
}

fn residual_at(dims: &[Vec<usize>], d_max: usize, sym: &[RatPoly], j: usize) -> RatPoly {
    let mut acc = RatPoly::zero();
    for (k, s) in sym.iter().enumerate() {
        let h = hilbert_row_poly(dims, j as i64 - 2 * k as i64);
        if h.is_zero() {
            continue;
        }
        let term = s.mul(&h);
        acc = if k % 2 == 0 {
            acc.add(&term)
        } else {
            acc.sub(&term)
        };
    }
    // truncate to the valid degree range
    RatPoly::from_coeffs(
        (0..=d_max).map(|i| acc.coeff(i)).collect(),
    )
}

/// Onset past which the Koszul residual vanishes identically within the
/// frontier; `None` when the last computed residual is still nonzero.
pub fn koszul_onset(dims: &[Vec<usize>], d_max: usize, degrees: &[usize]) -> Option<usize> {
    if dims.is_empty() {
        return None;
    }
    let sym = elementary_symmetric(degrees);
    let j_max = dims.len() - 1;
    let mut onset = None;
    for j in (0..=j_max).rev() {
        if residual_at(dims, d_max, &sym, j).is_zero() {
            onset = Some(j);
        } else {
            break;
        }
    }
    onset
}

/// The s-weighted alternating sum of shifted Hilbert series of Tor rows.
#[derive(Clone, Debug)]
pub struct KoszulResidualReport {
    /// (j, residual polynomial) for every computable j.
    pub residuals: Vec<(usize, RatPoly)>,
    pub onset: Option<usize>,
}

pub fn koszul_residual(table: &TorTable) -> KoszulResidualReport {
    let sym = elementary_symmetric(&table.relation_degrees);
    let residuals: Vec<(usize, RatPoly)> = (0..=table.j_max)
        .map(|j| (j, residual_at(&table.dims, table.d_max, &sym, j)))
        .collect();
    let onset = koszul_onset(&table.dims, table.d_max, &table.relation_degrees);
    KoszulResidualReport { residuals, onset }
}

/// The eventual even/odd length polynomials, fitted and verified on the
/// stabilized tail of the Tor table.
#[derive(Clone, Debug)]
pub struct FittedPair {
    /// P_ev(m) with length Tor_{2m} = P_ev(m) on the window.
    pub even: RatPoly,
    /// P_odd(m) with length Tor_{2m+1} = P_odd(m) on the window.
    pub odd: RatPoly,
    /// Homological index window [lo, hi] used (fit plus verification).
    pub window: (usize, usize),
    pub verified_points: usize,
}

/// Where the fitting window starts: the first index by which the Koszul
/// residual has vanished for c+1 consecutive steps, and never inside the
/// region where lengths are unconfined.
fn fit_window_start(table: &TorTable, c: usize) -> Result<usize> {
    let onset = table.stabilization_onset.ok_or_else(|| {
        EngineError::NotStabilized(
            "Koszul residual still nonzero at the frontier; raise J or D".into(),
        )
    })?;
    let finite_from = table.finite_length_from.ok_or_else(|| {
        EngineError::HypothesisViolation(
            "graded support of the Tor tail never confines within the frontier".into(),
        )
    })?;
    Ok((onset + c).max(finite_from))
}

/// Fit P_ev and P_odd of degree <= c-1 through the stabilized lengths and
/// verify them on every remaining sample in the window.
pub fn fit_even_odd(table: &TorTable, c: usize) -> Result<FittedPair> {
    if c == 0 {
        return Err(EngineError::InvalidInput(
            "fitting needs positive codimension".into(),
        ));
    }
    let start = fit_window_start(table, c)?;
    let mut even_pts = Vec::new();
    let mut odd_pts = Vec::new();
    for j in start..=table.j_max {
        let Some(len) = table.lengths[j] else {
            return Err(EngineError::HypothesisViolation(format!(
                "Tor_{j} lacks the finite-length flag inside the fitting window"
            )));
        };
        let val = int(len as i64);
        if j % 2 == 0 {
            even_pts.push(((j / 2) as i64, val));
        } else {
            odd_pts.push(((j / 2) as i64, val));
        }
    }
    if even_pts.len() < 2 * c || odd_pts.len() < 2 * c {
        return Err(EngineError::InsufficientWindow {
            detail: format!(
                "window starts at {start} and provides {} even / {} odd samples, need {} per parity",
                even_pts.len(),
                odd_pts.len(),
                2 * c
            ),
            suggested_j: start + 4 * c + 1,
        });
    }
    let fit_and_verify = |pts: &[(i64, BigRational)], parity: &str| -> Result<RatPoly> {
        let poly = interpolate(&pts[..c]);
        for (m, val) in &pts[c..] {
            if &poly.eval_at_integer(*m) != val {
                return Err(EngineError::NotStabilized(format!(
                    "{parity} length at index {} deviates from the degree-{} fit",
                    if parity == "even" { 2 * m } else { 2 * m + 1 },
                    c - 1
                )));
            }
        }
        Ok(poly)
    };
    let even = fit_and_verify(&even_pts, "even")?;
    let odd = fit_and_verify(&odd_pts, "odd")?;
    Ok(FittedPair {
        even,
        odd,
        window: (start, table.j_max),
        verified_points: even_pts.len() + odd_pts.len() - 2 * c,
    })
}

/// The eta invariant with its provenance: the fitted pair, the exact
/// value, theta when the codimension is one, and the slow limit quotients
/// for qualitative comparison.
#[derive(Clone, Debug)]
pub struct EtaReport {
    pub c: usize,
    pub eta: BigRational,
    /// 2 * eta, defined for hypersurfaces only.
    pub theta: Option<BigRational>,
    /// (n, partial alternating sum / n^c) at the last few n.
    pub limit_estimates: Vec<(usize, BigRational)>,
    pub fit: FittedPair,
}

pub fn eta(table: &TorTable, c: usize) -> Result<EtaReport> {
    let fit = fit_even_odd(table, c)?;
    let diff = fit.even.sub(&fit.odd);
    let reduced = finite_difference(&diff, c - 1);
    debug_assert!(reduced.degree().map_or(true, |d| d == 0));
    let mut denom = BigRational::one();
    for k in 1..=c {
        denom *= int(k as i64);
    }
    denom *= int(1 << c);
    let eta_val = reduced.coeff(0) / denom;
    let theta = (c == 1).then(|| &eta_val * int(2));
    let mut limit_estimates = Vec::new();
    for n in (table.j_max.saturating_sub(2)..=table.j_max).rev() {
        if n == 0 {
            continue;
        }
        let mut acc = BigRational::zero();
        for j in 0..=n {
            let term = int(table.beta(j) as i64);
            if j % 2 == 0 {
                acc += term;
            } else {
                acc -= term;
            }
        }
        let mut pow = BigRational::one();
        for _ in 0..c {
            pow *= int(n as i64);
        }
        limit_estimates.push((n, acc / pow));
    }
    Ok(EtaReport {
        c,
        eta: eta_val,
        theta,
        limit_estimates,
        fit,
    })
}

/// Generating-function data at an even start index E: the numerators
/// b_E(x,t), b_{E+1}(x,t) (coefficients listed by x-power), the polynomial
/// eta_{c,E}(t), its value and vanishing order at t = 1.
#[derive(Clone, Debug)]
pub struct GenFunReport {
    pub start: usize,
    pub c: usize,
    /// x-coefficients b_0..b_{c-1} of b_E(x,t).
    pub b_even: Vec<RatPoly>,
    /// x-coefficients of b_{E+1}(x,t).
    pub b_odd: Vec<RatPoly>,
    pub eta_poly: RatPoly,
    pub value_at_one: BigRational,
    /// Multiplicity of t = 1; `None` when eta_poly is identically zero.
    pub vanishing_order: Option<usize>,
    /// s_0..s_c, the elementary symmetric functions in t^{d_l}.
    pub symmetric: Vec<RatPoly>,
    /// Largest x-degree at which truncation was verified.
    pub x_degree_checked_to: usize,
}

/// Multiply the x-series of Tor Hilbert rows starting at F by
/// prod_l (1 - t^{d_l} x) and demand a polynomial of x-degree <= c-1.
fn bf_coefficients(
    table: &TorTable,
    sym: &[RatPoly],
    f_start: usize,
    c: usize,
) -> Result<(Vec<RatPoly>, usize)> {
    let m_max = (table.j_max - f_start) / 2;
    if m_max < c {
        return Err(EngineError::InsufficientWindow {
            detail: format!(
                "only {m_max} x-coefficients computable from start {f_start}, need more than {c}"
            ),
            suggested_j: f_start + 2 * (c + 1) + 1,
        });
    }
    let rows: Vec<RatPoly> = (0..=m_max)
        .map(|m| hilbert_row_poly(&table.dims, (f_start + 2 * m) as i64))
        .collect();
    let mut bs = Vec::with_capacity(m_max + 1);
    for m in 0..=m_max {
        let mut acc = RatPoly::zero();
        for k in 0..=m.min(c) {
            let term = sym[k].mul(&rows[m - k]);
            acc = if k % 2 == 0 { acc.add(&term) } else { acc.sub(&term) };
        }
        bs.push(acc);
    }
    for (m, b) in bs.iter().enumerate().skip(c) {
        if !b.is_zero() {
            return Err(EngineError::XDegreeDefect {
                xdeg: m,
                detail: format!(
                    "x-coefficient {m} of (prod_l (1 - t^d_l x)) G_{f_start} is {b}, expected 0"
                ),
            });
        }
    }
    bs.truncate(c);
    Ok((bs, m_max))
}

/// Assemble the generating-function report at even start E.
pub fn generating_function(table: &TorTable, c: usize, e_start: usize) -> Result<GenFunReport> {
    if c == 0 {
        return Err(EngineError::InvalidInput(
            "generating functions need positive codimension".into(),
        ));
    }
    if e_start % 2 != 0 {
        return Err(EngineError::InvalidInput("start index must be even".into()));
    }
    match table.finite_length_from {
        Some(f) if f <= e_start => {}
        _ => {
            return Err(EngineError::HypothesisViolation(format!(
                "Tor tail from {e_start} is not flagged finite-length"
            )))
        }
    }
    let sym = elementary_symmetric(&table.relation_degrees);
    let (b_even, m_even) = bf_coefficients(table, &sym, e_start, c)?;
    let (b_odd, m_odd) = bf_coefficients(table, &sym, e_start + 1, c)?;
    let sum = |bs: &[RatPoly]| {
        bs.iter()
            .fold(RatPoly::zero(), |acc, b| acc.add(b))
    };
    let eta_poly = sum(&b_even).sub(&sum(&b_odd));
    let value_at_one = eta_poly.eval_at_one();
    let vanishing_order = eta_poly.vanishing_order_at_one();
    Ok(GenFunReport {
        start: e_start,
        c,
        b_even,
        b_odd,
        eta_poly,
        value_at_one,
        vanishing_order,
        symmetric: sym,
        x_degree_checked_to: m_even.min(m_odd),
    })
}

/// Coefficientwise comparison of H_M H_N / H_R against the alternating sum
/// of Tor Hilbert series, through the degree range where the truncated sum
/// is complete.
#[derive(Clone, Debug)]
pub struct EulerCheck {
    pub max_deviation: BigRational,
    pub location: Option<usize>,
    pub compared_to_degree: usize,
}

/// Power-series division: coefficients of num/den up to `upto`, requiring
/// den(0) != 0.
fn series_div(num: &RatPoly, den: &RatPoly, upto: usize) -> Vec<BigRational> {
    let d0 = den.coeff(0);
    assert!(!d0.is_zero(), "division by a series with zero constant term");
    let mut q = Vec::with_capacity(upto + 1);
    for i in 0..=upto {
        let mut acc = num.coeff(i);
        for k in 1..=i {
            let dk = den.coeff(k);
            if dk.is_zero() {
                continue;
            }
            acc -= dk * &q[i - k];
        }
        q.push(acc / &d0);
    }
    q
}

/// Coefficients of (1-t)^exponent as a power series up to `upto` (negative
/// exponents give the binomial series).
fn one_minus_t_power(exponent: i64, upto: usize) -> Vec<BigRational> {
    if exponent >= 0 {
        let mut p = RatPoly::one();
        let base = RatPoly::from_i64_coeffs(&[1, -1]);
        for _ in 0..exponent {
            p = p.mul(&base);
        }
        return (0..=upto).map(|i| p.coeff(i)).collect();
    }
    let k = (-exponent) as usize;
    // (1-t)^{-k} = sum_i C(i+k-1, k-1) t^i
    let mut out = Vec::with_capacity(upto + 1);
    let mut c = BigRational::one();
    for i in 0..=upto {
        if i > 0 {
            // C(i+k-1, k-1) = C(i-1+k-1, k-1) * (i+k-1)/i
            c = c * int((i + k - 1) as i64) / int(i as i64);
        }
        out.push(c.clone());
    }
    out
}

pub fn euler_identity_check(
    h_m: &HilbertSeries,
    h_n: &HilbertSeries,
    h_r: &HilbertSeries,
    table: &TorTable,
) -> EulerCheck {
    // cutoff: the alternating sum is complete below the minimum support of
    // the last two computed rows
    let min_support = |j: usize| -> usize {
        table.dims[j]
            .iter()
            .position(|&d| d > 0)
            .unwrap_or(table.d_max + 1)
    };
    let mut cutoff = table.d_max + 1;
    if table.j_max >= 1 {
        cutoff = cutoff.min(min_support(table.j_max));
        cutoff = cutoff.min(min_support(table.j_max - 1));
    }
    let cutoff = cutoff.saturating_sub(1).min(table.d_max);
    // LHS: e_M e_N / e_R * (1-t)^(dim R - dim M - dim N)
    let num = h_m.numerator.mul(&h_n.numerator);
    let frac = series_div(&num, &h_r.numerator, cutoff);
    let exponent = h_r.pole_order as i64 - h_m.pole_order as i64 - h_n.pole_order as i64;
    let shift = one_minus_t_power(exponent, cutoff);
    let mut lhs = vec![BigRational::zero(); cutoff + 1];
    for i in 0..=cutoff {
        for k in 0..=i {
            if frac[k].is_zero() || shift[i - k].is_zero() {
                continue;
            }
            lhs[i] += &frac[k] * &shift[i - k];
        }
    }
    // RHS: alternating sum of table rows
    let mut max_dev = BigRational::zero();
    let mut location = None;
    for (i, lhs_c) in lhs.iter().enumerate() {
        let mut rhs = BigRational::zero();
        for j in 0..=table.j_max {
            let d = int(table.dims[j][i] as i64);
            if j % 2 == 0 {
                rhs += d;
            } else {
                rhs -= d;
            }
        }
        let dev = (lhs_c - rhs).abs();
        if dev > max_dev {
            max_dev = dev;
            location = Some(i);
        }
    }
    EulerCheck {
        max_deviation: max_dev,
        location,
        compared_to_degree: cutoff,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Rationals;
    use crate::module::GradedPresentation;
    use crate::poly::parse_polynomial;
    use crate::ring::QuotientRing;
    use crate::tor::tor_table;
    use std::sync::Arc;

    fn ring(vars: &[&str], relations: &[&str]) -> Arc<QuotientRing<Rationals>> {
        let names: Vec<String> = vars.iter().map(|s| s.to_string()).collect();
        let rels = relations
            .iter()
            .map(|s| parse_polynomial(&Rationals, &names, s).unwrap())
            .collect();
        QuotientRing::new(crate::ring::RingDescriptor::new(Rationals, names, rels).unwrap())
    }

    fn quotient_module(
        r: &Arc<QuotientRing<Rationals>>,
        label: &str,
        polys: &[&str],
    ) -> GradedPresentation<Rationals> {
        let names = r.descriptor().vars().to_vec();
        let ps: Vec<_> = polys
            .iter()
            .map(|s| parse_polynomial(&Rationals, &names, s).unwrap())
            .collect();
        GradedPresentation::quotient(r, label, &ps).unwrap()
    }

    #[test]
    fn hilbert_series_of_hypersurface_ring() {
        let r = ring(&["x", "y", "u", "v"], &["x*u + y*v"]);
        let real = ModuleRealization::new(Arc::clone(&r), GradedPresentation::ring_module("R", 4));
        let h = hilbert_series(&real, 12).unwrap();
        assert_eq!(h.pole_order, 3);
        assert_eq!(h.numerator, RatPoly::from_i64_coeffs(&[1, 1]));
    }

    #[test]
    fn hilbert_series_of_residue_field() {
        let r = ring(&["x", "y"], &["x^2", "y^2"]);
        let real =
            ModuleRealization::new(Arc::clone(&r), GradedPresentation::residue_field(&r));
        let h = hilbert_series(&real, 10).unwrap();
        assert_eq!(h.pole_order, 0);
        assert_eq!(h.numerator, RatPoly::one());
    }

    #[test]
    fn hilbert_series_of_plane_inside_jorgensen_ring() {
        let r = ring(&["x", "y", "z", "u"], &["x*y", "z*u"]);
        let m = quotient_module(&r, "M", &["y", "u"]);
        let real = ModuleRealization::new(Arc::clone(&r), m);
        let h = hilbert_series(&real, 12).unwrap();
        assert_eq!(h.pole_order, 2);
        assert_eq!(h.numerator, RatPoly::one());
    }

    #[test]
    fn multiplicity_polynomial_examples() {
        let r = ring(&["x"], &["x^2"]);
        let e = multiplicity_polynomial(r.descriptor());
        assert_eq!(e, RatPoly::from_i64_coeffs(&[1, 1]));
        assert_eq!(e.eval_at_one(), int(2));

        let r = ring(&["x", "y"], &["x^2", "y^2"]);
        let e = multiplicity_polynomial(r.descriptor());
        assert_eq!(e, RatPoly::from_i64_coeffs(&[1, 2, 1]));
        assert_eq!(e.eval_at_one(), int(4));

        let r = ring(&["x", "y"], &["x^2", "y^3"]);
        let e = multiplicity_polynomial(r.descriptor());
        assert_eq!(e, RatPoly::from_i64_coeffs(&[1, 2, 2, 1]));
        assert_eq!(e.eval_at_one(), int(6));
    }

    #[test]
    fn symmetric_functions_for_two_quadrics() {
        let s = elementary_symmetric(&[2, 2]);
        assert_eq!(s[0], RatPoly::one());
        assert_eq!(s[1], RatPoly::from_i64_coeffs(&[0, 0, 2]));
        assert_eq!(s[2], RatPoly::from_i64_coeffs(&[0, 0, 0, 0, 1]));
    }

    #[test]
    fn residual_vanishes_for_residue_field_over_dual_numbers() {
        let r = ring(&["x"], &["x^2"]);
        let k = GradedPresentation::residue_field(&r);
        let t = tor_table(&r, &k, &k, 8, 12, None).unwrap();
        let rep = koszul_residual(&t);
        // H_j = t^j: residual H_j - t^2 H_{j-2} = 0 from j = 2 on
        assert_eq!(rep.onset, Some(2));
        for (j, res) in &rep.residuals {
            if *j >= 2 {
                assert!(res.is_zero(), "residual at {j} is {res}");
            }
        }
    }

    #[test]
    fn residual_is_zero_against_free_second_argument() {
        let r = ring(&["x", "y"], &["x^2", "y^2"]);
        let m = quotient_module(&r, "M", &["x"]);
        let free = GradedPresentation::ring_module("R", 2);
        let t = tor_table(&r, &m, &free, 5, 9, None).unwrap();
        let rep = koszul_residual(&t);
        for (j, res) in &rep.residuals {
            if *j >= 1 {
                assert!(res.is_zero(), "residual at {j}");
            }
        }
    }

    #[test]
    fn fit_constant_lengths_over_dual_numbers() {
        let r = ring(&["x"], &["x^2"]);
        let k = GradedPresentation::residue_field(&r);
        let t = tor_table(&r, &k, &k, 10, 14, None).unwrap();
        let fit = fit_even_odd(&t, 1).unwrap();
        assert_eq!(fit.even, RatPoly::one());
        assert_eq!(fit.odd, RatPoly::one());
        let rep = eta(&t, 1).unwrap();
        assert!(rep.eta.is_zero());
        assert_eq!(rep.theta, Some(BigRational::zero()));
    }

    #[test]
    fn fit_linear_lengths_over_two_squares() {
        // b_j = j + 1: P_ev(m) = 2m + 1, P_odd(m) = 2m + 2, eta_2 = 0
        let r = ring(&["x", "y"], &["x^2", "y^2"]);
        let k = GradedPresentation::residue_field(&r);
        let t = tor_table(&r, &k, &k, 14, 18, None).unwrap();
        let fit = fit_even_odd(&t, 2).unwrap();
        assert_eq!(fit.even, RatPoly::from_i64_coeffs(&[1, 2]));
        assert_eq!(fit.odd, RatPoly::from_i64_coeffs(&[2, 2]));
        let rep = eta(&t, 2).unwrap();
        assert!(rep.eta.is_zero());
        assert_eq!(rep.theta, None);
    }

    #[test]
    fn generating_function_over_dual_numbers() {
        // b_F = t^F, eta_{1,E}(t) = t^E (1 - t), value 0 at t = 1
        let r = ring(&["x"], &["x^2"]);
        let k = GradedPresentation::residue_field(&r);
        let t = tor_table(&r, &k, &k, 10, 14, None).unwrap();
        let e_start = 4;
        let rep = generating_function(&t, 1, e_start).unwrap();
        assert_eq!(rep.b_even, vec![RatPoly::monomial(BigRational::one(), e_start)]);
        assert_eq!(
            rep.eta_poly,
            RatPoly::monomial(BigRational::one(), e_start)
                .mul(&RatPoly::from_i64_coeffs(&[1, -1]))
        );
        assert!(rep.value_at_one.is_zero());
        assert_eq!(rep.vanishing_order, Some(1));
    }

    #[test]
    fn generating_function_of_zero_tail_is_zero() {
        let r = ring(&["x", "y"], &["x^2", "y^2"]);
        let m = quotient_module(&r, "M", &["x"]);
        let free = GradedPresentation::ring_module("R", 2);
        let t = tor_table(&r, &m, &free, 9, 13, None).unwrap();
        let rep = generating_function(&t, 2, 2).unwrap();
        assert!(rep.eta_poly.is_zero());
        assert_eq!(rep.vanishing_order, None);
        assert!(rep.value_at_one.is_zero());
    }

    #[test]
    fn euler_identity_for_residue_field_pair() {
        // over Q[x]/(x^2): H_M H_N / H_R = 1/(1+t) = sum (-t)^j
        let r = ring(&["x"], &["x^2"]);
        let k = GradedPresentation::residue_field(&r);
        let t = tor_table(&r, &k, &k, 10, 14, None).unwrap();
        let real_k =
            ModuleRealization::new(Arc::clone(&r), GradedPresentation::residue_field(&r));
        let real_r =
            ModuleRealization::new(Arc::clone(&r), GradedPresentation::ring_module("R", 1));
        let hk = hilbert_series(&real_k, 14).unwrap();
        let hr = hilbert_series(&real_r, 14).unwrap();
        let check = euler_identity_check(&hk, &hk, &hr, &t);
        assert!(check.max_deviation.is_zero(), "dev at {:?}", check.location);
        assert!(check.compared_to_degree >= 8);
    }

    #[test]
    fn euler_identity_against_free_argument() {
        let r = ring(&["x", "y"], &["x^2", "y^2"]);
        let m = quotient_module(&r, "M", &["x"]);
        let free = GradedPresentation::ring_module("R", 2);
        let t = tor_table(&r, &m, &free, 6, 10, None).unwrap();
        let real_m = ModuleRealization::new(Arc::clone(&r), m);
        let real_r =
            ModuleRealization::new(Arc::clone(&r), GradedPresentation::ring_module("R", 2));
        let hm = hilbert_series(&real_m, 10).unwrap();
        let hr = hilbert_series(&real_r, 10).unwrap();
        let check = euler_identity_check(&hm, &hr, &hr, &t);
        assert!(check.max_deviation.is_zero());
    }

    #[test]
    fn one_minus_t_negative_power_is_binomial_series() {
        let s = one_minus_t_power(-3, 4);
        let expect: Vec<BigRational> =
            [1, 3, 6, 10, 15].iter().map(|&n| int(n)).collect();
        assert_eq!(s, expect);
    }
}
