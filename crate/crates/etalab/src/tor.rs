//! Graded Tor tables: tensor a minimal resolution of M with N and take
//! exact degreewise homology dimensions.
//!
//! Only dimensions are kept per cell: dim Tor_j(M,N)_i equals
//! dim ker(outgoing) - rank(incoming), and both numbers come from exact
//! ranks. Cells are independent given the resolution, so the rank grid is
//! evaluated through the data-parallel layer.

use crate::error::Result;
use crate::field::Field;
use crate::invariants;
use crate::matrix::DenseMatrix;
use crate::module::{GradedPresentation, ModuleMap, ModuleRealization};
use crate::resolution::{resolve, resolve_over_ambient, Resolution};
use crate::ring::QuotientRing;
use std::sync::Arc;

/// Exact graded dimensions of Tor_j(M,N)_i over the valid region
/// j <= j_max, i <= d_max, plus length bookkeeping.
#[derive(Clone, Debug)]
pub struct TorTable {
    pub m_label: String,
    pub n_label: String,
    /// Relation degrees d_l of the ring (used by the residual and the
    /// generating functions).
    pub relation_degrees: Vec<usize>,
    /// dims[j][i] for 0 <= j <= j_max, 0 <= i <= d_max.
    pub dims: Vec<Vec<usize>>,
    pub j_max: usize,
    pub d_max: usize,
    /// Trailing-window width used for the finite-length flags.
    pub window: usize,
    /// beta_j where the finite-length flag holds, else None.
    pub lengths: Vec<Option<usize>>,
    /// Earliest j with every later computed Tor flagged finite-length.
    pub finite_length_from: Option<usize>,
    /// Onset past which the Koszul identity residual vanishes identically.
    pub stabilization_onset: Option<usize>,
}

impl TorTable {
    pub fn dim(&self, j: usize, i: usize) -> usize {
        if j > self.j_max || i > self.d_max {
            return 0;
        }
        self.dims[j][i]
    }

    /// beta_j in Dao's convention: the length where finite, else 0.
    pub fn beta(&self, j: usize) -> usize {
        self.lengths.get(j).copied().flatten().unwrap_or(0)
    }

    pub fn row_is_zero(&self, j: usize) -> bool {
        self.dims[j].iter().all(|&d| d == 0)
    }

    /// Hilbert series coefficients of Tor_j, up to d_max.
    pub fn hilbert_row(&self, j: usize) -> Vec<usize> {
        if j > self.j_max {
            return vec![0; self.d_max + 1];
        }
        self.dims[j].clone()
    }
}

/// Default trailing-window width for finite-length detection.
pub fn default_window<F: Field>(ring: &QuotientRing<F>) -> usize {
    ring.descriptor().max_relation_degree() + 2
}

fn is_residue_field<F: Field>(ring: &Arc<QuotientRing<F>>, m: &GradedPresentation<F>) -> bool {
    if m.generators.twists != vec![0] {
        return false;
    }
    let real = ModuleRealization::new(Arc::clone(ring), m.clone());
    real.dim(0) == 1 && real.dim(1) == 0
}

/// Dimensions of the degree-i piece of F (x) N for a free module F.
fn tensor_dim<F: Field>(real: &ModuleRealization<F>, twists: &[usize], i: usize) -> usize {
    twists
        .iter()
        .map(|&a| real.dim(i as i64 - a as i64))
        .sum()
}

/// Matrix of (d (x) N) at internal degree i, blocks given by the action of
/// the map entries on the realization of N.
fn tensor_piece_matrix<F: Field>(
    real: &ModuleRealization<F>,
    map: &ModuleMap<F>,
    i: usize,
) -> DenseMatrix<F> {
    let field = real.ring().field().clone();
    let src_twists = &map.source.twists;
    let dst_twists = &map.target.twists;
    let mut src_offsets = Vec::with_capacity(src_twists.len());
    let mut acc = 0;
    for &b in src_twists {
        src_offsets.push(acc);
        acc += real.dim(i as i64 - b as i64);
    }
    let src_dim = acc;
    let mut dst_offsets = Vec::with_capacity(dst_twists.len());
    let mut acc = 0;
    for &a in dst_twists {
        dst_offsets.push(acc);
        acc += real.dim(i as i64 - a as i64);
    }
    let dst_dim = acc;
    let mut out = DenseMatrix::zeros(field.clone(), dst_dim, src_dim);
    for (s, &b) in src_twists.iter().enumerate() {
        if (i as i64) < b as i64 {
            continue;
        }
        let from = i - b;
        if real.dim(from as i64) == 0 {
            continue;
        }
        for r in 0..dst_twists.len() {
            let g = map.entry(r, s);
            if g.is_zero() {
                continue;
            }
            let block = real.action_matrix(g, from);
            if block.rows() == 0 || block.cols() == 0 {
                continue;
            }
            for br in 0..block.rows() {
                for bc in 0..block.cols() {
                    let e = block.at(br, bc);
                    if !field.is_zero(e) {
                        *out.at_mut(dst_offsets[r] + br, src_offsets[s] + bc) = e.clone();
                    }
                }
            }
        }
    }
    out
}

/// Compute the Tor table for the pair (M, N) at bounds (J, D).
///
/// When M is the residue field the table short-circuits to the graded
/// Betti numbers of N's resolution (minimality makes the tensored
/// differentials vanish); otherwise M is resolved and tensored with the
/// degreewise realization of N.
pub fn tor_table<F: Field>(
    ring: &Arc<QuotientRing<F>>,
    m: &GradedPresentation<F>,
    n: &GradedPresentation<F>,
    j_bound: usize,
    d_bound: usize,
    window: Option<usize>,
) -> Result<TorTable> {
    let window = window.unwrap_or_else(|| default_window(ring));
    if is_residue_field(ring, m) {
        let res = resolve(ring, n, j_bound, d_bound)?;
        let table = table_from_betti(&res, m, n, window);
        return Ok(table);
    }
    let res = resolve(ring, m, j_bound, d_bound)?;
    let real = ModuleRealization::new(Arc::clone(ring), n.clone());
    Ok(table_from_resolution(&res, &real, m, n, window))
}

/// Tor table from an already-computed resolution of M tensored with N.
pub fn table_from_resolution<F: Field>(
    res: &Resolution<F>,
    real: &ModuleRealization<F>,
    m: &GradedPresentation<F>,
    n: &GradedPresentation<F>,
    window: usize,
) -> TorTable {
    let j_bound = res.j_bound;
    let d_bound = res.d_bound;
    let j_max = j_bound.saturating_sub(1);
    // rank grid for the tensored differentials, evaluated in parallel
    let jobs: Vec<(usize, usize)> = (1..=res.maps.len())
        .flat_map(|j| (0..=d_bound).map(move |i| (j, i)))
        .collect();
    let ranks_flat = crate::par::map_jobs(jobs.clone(), |(j, i)| {
        tensor_piece_matrix(real, &res.maps[j - 1], i).rank()
    });
    let mut rank = vec![vec![0usize; d_bound + 1]; res.maps.len() + 2];
    for ((j, i), r) in jobs.into_iter().zip(ranks_flat) {
        rank[j][i] = r;
    }
    let mut dims = vec![vec![0usize; d_bound + 1]; j_max + 1];
    for (j, row) in dims.iter_mut().enumerate() {
        let twists: &[usize] = res.modules.get(j).map_or(&[], |m| &m.twists);
        for (i, cell) in row.iter_mut().enumerate() {
            let total = tensor_dim(real, twists, i);
            let out_rank = rank.get(j).map_or(0, |r| r[i]);
            let in_rank = rank.get(j + 1).map_or(0, |r| r[i]);
            debug_assert!(total >= out_rank + in_rank);
            *cell = total - out_rank - in_rank;
        }
    }
    finalize_table(
        dims,
        j_max,
        d_bound,
        window,
        res.ring.descriptor().relation_degrees().to_vec(),
        m.label.clone(),
        n.label.clone(),
    )
}

fn table_from_betti<F: Field>(
    res: &Resolution<F>,
    m: &GradedPresentation<F>,
    n: &GradedPresentation<F>,
    window: usize,
) -> TorTable {
    let j_max = res.j_bound.saturating_sub(1);
    let d_bound = res.d_bound;
    let mut dims = vec![vec![0usize; d_bound + 1]; j_max + 1];
    for (j, row) in dims.iter_mut().enumerate() {
        if let Some(fm) = res.modules.get(j) {
            for &a in &fm.twists {
                if a <= d_bound {
                    row[a] += 1;
                }
            }
        }
    }
    finalize_table(
        dims,
        j_max,
        d_bound,
        window,
        res.ring.descriptor().relation_degrees().to_vec(),
        m.label.clone(),
        n.label.clone(),
    )
}

fn finalize_table(
    dims: Vec<Vec<usize>>,
    j_max: usize,
    d_max: usize,
    window: usize,
    relation_degrees: Vec<usize>,
    m_label: String,
    n_label: String,
) -> TorTable {
    let mut lengths = Vec::with_capacity(j_max + 1);
    for row in &dims {
        let finite = d_max + 1 >= window
            && row[d_max + 1 - window..].iter().all(|&d| d == 0);
        lengths.push(finite.then(|| row.iter().sum()));
    }
    let mut finite_length_from = None;
    for j in (0..=j_max).rev() {
        if lengths[j].is_some() {
            finite_length_from = Some(j);
        } else {
            break;
        }
    }
    let stabilization_onset =
        invariants::koszul_onset(&dims, d_max, &relation_degrees);
    TorTable {
        m_label,
        n_label,
        relation_degrees,
        dims,
        j_max,
        d_max,
        window,
        lengths,
        finite_length_from,
        stabilization_onset,
    }
}

/// Balance-of-Tor audit: the tables from resolving M and from resolving N
/// must agree on the intersection of their valid regions.
#[derive(Clone, Debug)]
pub struct SymmetryReport {
    pub agree: bool,
    /// (j, i, dim from M side, dim from N side) of the worst deviation.
    pub max_deviation: Option<(usize, usize, usize, usize)>,
}

pub fn tor_symmetric_check<F: Field>(
    ring: &Arc<QuotientRing<F>>,
    m: &GradedPresentation<F>,
    n: &GradedPresentation<F>,
    j_bound: usize,
    d_bound: usize,
) -> Result<SymmetryReport> {
    let t_mn = tor_table(ring, m, n, j_bound, d_bound, None)?;
    let t_nm = tor_table(ring, n, m, j_bound, d_bound, None)?;
    let mut worst: Option<(usize, usize, usize, usize)> = None;
    for j in 0..=t_mn.j_max.min(t_nm.j_max) {
        for i in 0..=t_mn.d_max.min(t_nm.d_max) {
            let a = t_mn.dim(j, i);
            let b = t_nm.dim(j, i);
            if a != b {
                let dev = a.abs_diff(b);
                if worst.map_or(true, |(_, _, wa, wb)| dev > wa.abs_diff(wb)) {
                    worst = Some((j, i, a, b));
                }
            }
        }
    }
    Ok(SymmetryReport {
        agree: worst.is_none(),
        max_deviation: worst,
    })
}

/// Certificate that Tor^Q_j(M,N) vanishes for large j: the ambient
/// resolution is finite, so everything past its length is exactly zero.
#[derive(Clone, Debug)]
pub struct AmbientVanishing {
    /// Largest j with a nonzero computed Tor^Q_j(M,N).
    pub max_nonzero_j: Option<usize>,
    /// Length of the minimal resolution of M over Q.
    pub resolution_length: usize,
    /// Number of variables (the Hilbert syzygy bound).
    pub variable_bound: usize,
    pub degree_bound: usize,
}

pub fn ambient_tor_vanishing<F: Field>(
    ring: &Arc<QuotientRing<F>>,
    m: &GradedPresentation<F>,
    n: &GradedPresentation<F>,
    d_bound: usize,
) -> Result<AmbientVanishing> {
    let res = resolve_over_ambient(ring, m, d_bound)?;
    let ambient = Arc::clone(&res.ring);
    let real = ModuleRealization::new(ambient, n.clone());
    let length = res.length().unwrap_or(0);
    let mut max_nonzero = None;
    for j in 0..=length {
        let twists: &[usize] = res.modules.get(j).map_or(&[], |fm| &fm.twists);
        for i in 0..=d_bound {
            let total = tensor_dim(&real, twists, i);
            let out_rank = match j.checked_sub(1).and_then(|k| res.maps.get(k)) {
                Some(mp) => tensor_piece_matrix(&real, mp, i).rank(),
                None => 0,
            };
            let in_rank = res
                .maps
                .get(j)
                .map_or(0, |mp| tensor_piece_matrix(&real, mp, i).rank());
            if total - out_rank - in_rank > 0 {
                max_nonzero = Some(j);
                break;
            }
        }
    }
    Ok(AmbientVanishing {
        max_nonzero_j: max_nonzero,
        resolution_length: length,
        variable_bound: ring.descriptor().num_vars(),
        degree_bound: d_bound,
    })
}

/// One window of c consecutive vanishing Tor modules, and whether a later
/// nonzero Tor witnesses a rigidity violation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RigidityWindow {
    pub start: usize,
    pub len: usize,
    pub violation_witness: Option<usize>,
}

#[derive(Clone, Debug)]
pub struct RigidityFindings {
    pub windows: Vec<RigidityWindow>,
}

impl RigidityFindings {
    pub fn has_violation(&self) -> bool {
        self.windows.iter().any(|w| w.violation_witness.is_some())
    }
}

/// Scan for c consecutive zero Tor modules followed (or not) by a nonzero
/// one, within the computed frontier.
pub fn rigidity_scan(table: &TorTable, c: usize) -> RigidityFindings {
    assert!(c >= 1);
    let zero: Vec<bool> = (0..=table.j_max).map(|j| table.row_is_zero(j)).collect();
    let mut windows = Vec::new();
    for start in 1..=table.j_max.saturating_sub(c - 1) {
        if (start..start + c).all(|j| zero[j]) {
            let witness = (start + c..=table.j_max).find(|&j| !zero[j]);
            windows.push(RigidityWindow {
                start,
                len: c,
                violation_witness: witness,
            });
        }
    }
    RigidityFindings { windows }
}
