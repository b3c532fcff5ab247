//! Finitely generated graded R-modules: free modules with twists,
//! homogeneous maps between them, presented modules realized degree by
//! degree, and the syzygy primitive behind every resolution.
//!
//! Twist convention: a free module stores the degrees a_i of its
//! generators, so R(-a) has one generator of twist a and its degree-d piece
//! is R_{d-a}.

use crate::error::{EngineError, Result};
use crate::field::Field;
use crate::matrix::{DenseMatrix, Echelon};
use crate::poly::{Monomial, Polynomial};
use crate::ring::QuotientRing;
use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, RwLock};

/// A graded free module (+)_i R(-a_i), recorded by the generator degrees.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FreeModule {
    pub twists: Vec<usize>,
}

/// Layout of the degree-d piece of a free module: one block per generator.
#[derive(Clone, Debug)]
pub struct PieceLayout {
    /// Per generator: (twist, offset, block dimension).
    pub blocks: Vec<(usize, usize, usize)>,
    pub dim: usize,
}

impl FreeModule {
    pub fn new(twists: Vec<usize>) -> Self {
        FreeModule { twists }
    }

    pub fn rank(&self) -> usize {
        self.twists.len()
    }

    pub fn max_twist(&self) -> Option<usize> {
        self.twists.iter().copied().max()
    }

    pub fn piece_layout<F: Field>(&self, ring: &QuotientRing<F>, d: usize) -> PieceLayout {
        let mut blocks = Vec::with_capacity(self.twists.len());
        let mut offset = 0;
        for &a in &self.twists {
            let dim = ring.dim(d as i64 - a as i64);
            blocks.push((a, offset, dim));
            offset += dim;
        }
        PieceLayout {
            blocks,
            dim: offset,
        }
    }

    pub fn piece_dim<F: Field>(&self, ring: &QuotientRing<F>, d: usize) -> usize {
        self.twists
            .iter()
            .map(|&a| ring.dim(d as i64 - a as i64))
            .sum()
    }
}

/// A homogeneous map of graded free modules, stored as a matrix of
/// polynomials (row index over target generators, column index over source
/// generators). Entry (i, j) is homogeneous of degree
/// `source.twists[j] - target.twists[i]`, or zero.
#[derive(Clone, Debug)]
pub struct ModuleMap<F: Field> {
    pub source: FreeModule,
    pub target: FreeModule,
    entries: Vec<Polynomial<F>>,
}

impl<F: Field> ModuleMap<F> {
    pub fn new(
        source: FreeModule,
        target: FreeModule,
        entries: Vec<Polynomial<F>>,
    ) -> Result<Self> {
        if entries.len() != source.rank() * target.rank() {
            return Err(EngineError::InvalidInput(format!(
                "expected {} entries, got {}",
                source.rank() * target.rank(),
                entries.len()
            )));
        }
        let map = ModuleMap {
            source,
            target,
            entries,
        };
        for i in 0..map.target.rank() {
            for j in 0..map.source.rank() {
                let e = map.entry(i, j);
                if e.is_zero() {
                    continue;
                }
                let need = map.source.twists[j] as i64 - map.target.twists[i] as i64;
                match e.degree_if_homogeneous() {
                    Some(d) if d as i64 == need => {}
                    _ => {
                        return Err(EngineError::InvalidInput(format!(
                            "entry ({i},{j}) must be homogeneous of degree {need}"
                        )))
                    }
                }
            }
        }
        Ok(map)
    }

    /// The zero map into `target` from a rank-0 source.
    pub fn empty(target: FreeModule, nvars: usize) -> Self {
        let _ = nvars;
        ModuleMap {
            source: FreeModule::new(Vec::new()),
            target,
            entries: Vec::new(),
        }
    }

    pub fn entry(&self, i: usize, j: usize) -> &Polynomial<F> {
        &self.entries[i * self.source.rank() + j]
    }

    pub fn entries(&self) -> &[Polynomial<F>] {
        &self.entries
    }

    pub fn is_zero_map(&self) -> bool {
        self.entries.iter().all(Polynomial::is_zero)
    }

    /// Restriction to a subset of source columns, preserving order.
    pub fn submap(&self, cols: &[usize]) -> Self {
        let twists = cols.iter().map(|&j| self.source.twists[j]).collect();
        let mut entries = Vec::with_capacity(cols.len() * self.target.rank());
        for i in 0..self.target.rank() {
            for &j in cols {
                entries.push(self.entry(i, j).clone());
            }
        }
        ModuleMap {
            source: FreeModule::new(twists),
            target: self.target.clone(),
            entries,
        }
    }

    /// The k-linear map (source)_d -> (target)_d assembled from
    /// multiplication blocks.
    pub fn piece_matrix(&self, ring: &QuotientRing<F>, d: usize) -> DenseMatrix<F> {
        let field = ring.field().clone();
        let src = self.source.piece_layout(ring, d);
        let dst = self.target.piece_layout(ring, d);
        let mut out = DenseMatrix::zeros(field.clone(), dst.dim, src.dim);
        for (i, &(ai, ri, dimi)) in dst.blocks.iter().enumerate() {
            if dimi == 0 {
                continue;
            }
            for (j, &(bj, cj, dimj)) in src.blocks.iter().enumerate() {
                if dimj == 0 {
                    continue;
                }
                let g = self.entry(i, j);
                if g.is_zero() {
                    continue;
                }
                debug_assert!(bj >= ai);
                let block = ring.mult_map(g, d - bj);
                debug_assert_eq!(block.rows(), dimi);
                debug_assert_eq!(block.cols(), dimj);
                for r in 0..dimi {
                    for c in 0..dimj {
                        let e = block.at(r, c);
                        if !field.is_zero(e) {
                            *out.at_mut(ri + r, cj + c) = e.clone();
                        }
                    }
                }
            }
        }
        out
    }

    /// Polynomial composition `self . other` (entries are not reduced
    /// modulo the relations; reduce with the ring to test exactness).
    pub fn compose(&self, field: &F, other: &ModuleMap<F>) -> Result<ModuleMap<F>> {
        if self.source.twists != other.target.twists {
            return Err(EngineError::InvalidInput(
                "composition twist mismatch".into(),
            ));
        }
        let rows = self.target.rank();
        let mid = self.source.rank();
        let cols = other.source.rank();
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                let mut acc = Polynomial::zero(
                    self.entries
                        .first()
                        .map_or(other.entries.first().map_or(0, Polynomial::nvars), Polynomial::nvars),
                );
                for k in 0..mid {
                    let a = self.entry(i, k);
                    let b = other.entry(k, j);
                    if a.is_zero() || b.is_zero() {
                        continue;
                    }
                    acc = acc.add(field, &a.mul(field, b));
                }
                entries.push(acc);
            }
        }
        Ok(ModuleMap {
            source: other.source.clone(),
            target: self.target.clone(),
            entries,
        })
    }

    /// True when every entry reduces to zero in R (used for d.d = 0
    /// audits).
    pub fn reduces_to_zero(&self, ring: &QuotientRing<F>) -> bool {
        let field = ring.field();
        self.entries.iter().all(|e| {
            if e.is_zero() {
                return true;
            }
            let d = e.degree_if_homogeneous().expect("homogeneous entry");
            ring.piece(d)
                .reduce(field, e)
                .iter()
                .all(|c| field.is_zero(c))
        })
    }

    /// Minimality: every entry with matching twists (degree-zero slot) is
    /// zero, i.e. the whole matrix lies in the irrelevant ideal.
    pub fn entries_in_irrelevant_ideal(&self) -> bool {
        for i in 0..self.target.rank() {
            for j in 0..self.source.rank() {
                if self.source.twists[j] == self.target.twists[i]
                    && !self.entry(i, j).is_zero()
                {
                    return false;
                }
            }
        }
        true
    }
}

/// A finitely generated graded module presented as coker(relations).
#[derive(Clone, Debug)]
pub struct GradedPresentation<F: Field> {
    pub label: String,
    pub generators: FreeModule,
    pub relations: ModuleMap<F>,
}

impl<F: Field> GradedPresentation<F> {
    pub fn new(label: impl Into<String>, relations: ModuleMap<F>) -> Self {
        GradedPresentation {
            label: label.into(),
            generators: relations.target.clone(),
            relations,
        }
    }

    /// The free module with the given twists (no relations).
    pub fn free(label: impl Into<String>, nvars: usize, twists: Vec<usize>) -> Self {
        let target = FreeModule::new(twists);
        GradedPresentation {
            label: label.into(),
            generators: target.clone(),
            relations: ModuleMap::empty(target, nvars),
        }
    }

    /// The ring itself as a module.
    pub fn ring_module(label: impl Into<String>, nvars: usize) -> Self {
        Self::free(label, nvars, vec![0])
    }

    /// The residue field k = R/m.
    pub fn residue_field(ring: &QuotientRing<F>) -> Self {
        let field = ring.field();
        let v = ring.descriptor().num_vars();
        let polys: Vec<Polynomial<F>> = (0..v)
            .map(|i| Polynomial::variable(field, v, i))
            .collect();
        Self::quotient(ring, "k", &polys).expect("residue field presentation")
    }

    /// R/(g_1, ..., g_m) for homogeneous g_i of positive degree.
    pub fn quotient(
        ring: &QuotientRing<F>,
        label: impl Into<String>,
        polys: &[Polynomial<F>],
    ) -> Result<Self> {
        let mut twists = Vec::with_capacity(polys.len());
        for g in polys {
            match g.degree_if_homogeneous() {
                Some(d) if d >= 1 => twists.push(d),
                _ => {
                    return Err(EngineError::InvalidInput(
                        "quotient relations must be homogeneous of positive degree".into(),
                    ))
                }
            }
        }
        let relations = ModuleMap::new(
            FreeModule::new(twists),
            FreeModule::new(vec![0]),
            polys.to_vec(),
        )?;
        Ok(Self::new(label, relations))
    }

    pub fn max_generator_degree(&self) -> usize {
        self.generators.max_twist().unwrap_or(0)
    }

    pub fn max_relation_degree(&self) -> usize {
        self.relations.source.max_twist().unwrap_or(0)
    }

    /// Direct sum of two presentations (generators concatenated, relations
    /// block diagonal).
    pub fn direct_sum(&self, field: &F, other: &Self, label: impl Into<String>) -> Self {
        let nvars = self
            .relations
            .entries()
            .first()
            .or_else(|| other.relations.entries().first())
            .map_or(0, Polynomial::nvars);
        let gens: Vec<usize> = self
            .generators
            .twists
            .iter()
            .chain(&other.generators.twists)
            .copied()
            .collect();
        let rels: Vec<usize> = self
            .relations
            .source
            .twists
            .iter()
            .chain(&other.relations.source.twists)
            .copied()
            .collect();
        let (r1, c1) = (self.generators.rank(), self.relations.source.rank());
        let (r2, c2) = (other.generators.rank(), other.relations.source.rank());
        let _ = field;
        let mut entries = Vec::with_capacity((r1 + r2) * (c1 + c2));
        for i in 0..r1 + r2 {
            for j in 0..c1 + c2 {
                let e = if i < r1 && j < c1 {
                    self.relations.entry(i, j).clone()
                } else if i >= r1 && j >= c1 {
                    other.relations.entry(i - r1, j - c1).clone()
                } else {
                    Polynomial::zero(nvars)
                };
                entries.push(e);
            }
        }
        GradedPresentation {
            label: label.into(),
            generators: FreeModule::new(gens.clone()),
            relations: ModuleMap {
                source: FreeModule::new(rels),
                target: FreeModule::new(gens),
                entries,
            },
        }
    }
}

/// Remove unit entries from a presentation by row/column operations, so
/// downstream minimality starts from a minimal generator set. Columns that
/// become identically zero are dropped.
pub fn strip_units<F: Field>(field: &F, pres: &GradedPresentation<F>) -> GradedPresentation<F> {
    let nvars = pres
        .relations
        .entries()
        .first()
        .map_or(0, Polynomial::nvars);
    let mut gens = pres.generators.twists.clone();
    let mut rel_twists = pres.relations.source.twists.clone();
    // column-major copy
    let mut cols: Vec<Vec<Polynomial<F>>> = (0..rel_twists.len())
        .map(|j| {
            (0..gens.len())
                .map(|i| pres.relations.entry(i, j).clone())
                .collect()
        })
        .collect();
    loop {
        let mut unit = None;
        'search: for (j, col) in cols.iter().enumerate() {
            for (i, e) in col.iter().enumerate() {
                if !e.is_zero() && e.degree_if_homogeneous() == Some(0) {
                    unit = Some((i, j));
                    break 'search;
                }
            }
        }
        let Some((i, j)) = unit else { break };
        let c = cols[j][i]
            .coefficient(&Monomial::one(nvars.max(1)))
            .cloned()
            .expect("constant entry");
        let cinv = field.inv(&c);
        let pivot_col = cols[j].clone();
        for (j2, col) in cols.iter_mut().enumerate() {
            if j2 == j {
                continue;
            }
            let h = col[i].clone();
            if h.is_zero() {
                continue;
            }
            let scale = h.scale(field, &cinv);
            for (k, e) in col.iter_mut().enumerate() {
                *e = e.sub(field, &scale.mul(field, &pivot_col[k]));
            }
            debug_assert!(col[i].is_zero());
        }
        cols.remove(j);
        rel_twists.remove(j);
        for col in &mut cols {
            col.remove(i);
        }
        gens.remove(i);
    }
    // drop zero columns
    let keep: Vec<usize> = (0..cols.len())
        .filter(|&j| cols[j].iter().any(|e| !e.is_zero()))
        .collect();
    let rel_twists: Vec<usize> = keep.iter().map(|&j| rel_twists[j]).collect();
    let mut entries = Vec::with_capacity(gens.len() * rel_twists.len());
    for i in 0..gens.len() {
        for &j in &keep {
            entries.push(cols[j][i].clone());
        }
    }
    GradedPresentation {
        label: pres.label.clone(),
        generators: FreeModule::new(gens.clone()),
        relations: ModuleMap {
            source: FreeModule::new(rel_twists),
            target: FreeModule::new(gens),
            entries,
        },
    }
}

/// The degree-d piece of a presented module: a basis as a complement of
/// the relation image inside the generator piece, plus the projection.
#[derive(Debug)]
pub struct ModulePiece<F: Field> {
    pub degree: usize,
    /// (generator index, index into the ring piece basis) per basis vector.
    pub basis: Vec<(usize, usize)>,
    layout: PieceLayout,
    reducer: Echelon<F>,
    basis_position: Vec<Option<usize>>,
}

impl<F: Field> ModulePiece<F> {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn generator_piece_dim(&self) -> usize {
        self.layout.dim
    }

    pub fn layout(&self) -> &PieceLayout {
        &self.layout
    }

    /// Project coordinates over the generator piece onto the module basis.
    pub fn reduce(&self, field: &F, mut coords: Vec<F::Elem>) -> Vec<F::Elem> {
        self.reducer.reduce(&mut coords);
        let mut out = vec![field.zero(); self.basis.len()];
        for (i, slot) in self.basis_position.iter().enumerate() {
            if let Some(b) = slot {
                out[*b] = std::mem::replace(&mut coords[i], field.zero());
            } else {
                debug_assert!(field.is_zero(&coords[i]));
            }
        }
        out
    }
}

/// A presented module together with its memoized degreewise realization.
#[derive(Debug)]
pub struct ModuleRealization<F: Field> {
    ring: Arc<QuotientRing<F>>,
    pres: GradedPresentation<F>,
    pieces: RwLock<HashMap<usize, Arc<ModulePiece<F>>>>,
}

impl<F: Field> ModuleRealization<F> {
    pub fn new(ring: Arc<QuotientRing<F>>, pres: GradedPresentation<F>) -> Self {
        ModuleRealization {
            ring,
            pres,
            pieces: RwLock::new(HashMap::new()),
        }
    }

    pub fn ring(&self) -> &Arc<QuotientRing<F>> {
        &self.ring
    }

    pub fn presentation(&self) -> &GradedPresentation<F> {
        &self.pres
    }

    /// dim_k M_d; zero for negative degrees.
    pub fn dim(&self, d: i64) -> usize {
        if d < 0 {
            return 0;
        }
        self.piece(d as usize).dim()
    }

    pub fn piece(&self, d: usize) -> Arc<ModulePiece<F>> {
        if let Some(p) = self.pieces.read().unwrap().get(&d) {
            return Arc::clone(p);
        }
        let computed = Arc::new(self.compute_piece(d));
        let mut w = self.pieces.write().unwrap();
        Arc::clone(w.entry(d).or_insert(computed))
    }

    fn compute_piece(&self, d: usize) -> ModulePiece<F> {
        let field = self.ring.field().clone();
        let layout = self.pres.generators.piece_layout(&self.ring, d);
        let mut reducer = Echelon::new(field.clone(), layout.dim);
        if self.pres.relations.source.rank() > 0 && layout.dim > 0 {
            let rel = self.pres.relations.piece_matrix(&self.ring, d);
            for c in 0..rel.cols() {
                reducer.absorb(rel.column(c));
                if reducer.is_full() {
                    break;
                }
            }
        }
        let mut pivot = vec![false; layout.dim];
        for p in reducer.pivots() {
            pivot[p] = true;
        }
        let mut basis = Vec::new();
        let mut basis_position = vec![None; layout.dim];
        for (g, &(_, offset, dim)) in layout.blocks.iter().enumerate() {
            for q in 0..dim {
                let pos = offset + q;
                if !pivot[pos] {
                    basis_position[pos] = Some(basis.len());
                    basis.push((g, q));
                }
            }
        }
        ModulePiece {
            degree: d,
            basis,
            layout,
            reducer,
            basis_position,
        }
    }

    /// Matrix of multiplication by a homogeneous `g` from M_d to
    /// M_{d + deg g}.
    pub fn action_matrix(&self, g: &Polynomial<F>, d: usize) -> DenseMatrix<F> {
        let field = self.ring.field().clone();
        let src = self.piece(d);
        let e = g.degree_if_homogeneous().unwrap_or(0);
        let dst = self.piece(d + e);
        let mut out = DenseMatrix::zeros(field.clone(), dst.dim(), src.dim());
        if g.is_zero() || src.dim() == 0 || dst.dim() == 0 {
            return out;
        }
        for (col, &(gen, q)) in src.basis.iter().enumerate() {
            let a = self.pres.generators.twists[gen];
            let u = self.ring.piece(d - a).basis[q].clone();
            let w = g.mul_monomial(&u);
            let rw = self.ring.piece(d + e - a).reduce(&field, &w);
            let mut coords = vec![field.zero(); dst.generator_piece_dim()];
            let (_, offset, dim) = dst.layout().blocks[gen];
            debug_assert_eq!(dim, rw.len());
            coords[offset..offset + dim].clone_from_slice(&rw);
            let reduced = dst.reduce(&field, coords);
            for (r, elem) in reduced.into_iter().enumerate() {
                if !field.is_zero(&elem) {
                    *out.at_mut(r, col) = elem;
                }
            }
        }
        out
    }
}

/// dim_k of the degree-d piece of the presented module.
pub fn module_piece_dim<F: Field>(real: &ModuleRealization<F>, d: usize) -> usize {
    real.dim(d as i64)
}

/// Multiply a piece vector by variable `i`, moving it from degree d to
/// degree d+1 of the same free module.
fn apply_variable<F: Field>(
    ring: &QuotientRing<F>,
    from: &PieceLayout,
    to: &PieceLayout,
    var: usize,
    v: &[F::Elem],
    d: usize,
) -> Vec<F::Elem> {
    let field = ring.field().clone();
    let mut out = vec![field.zero(); to.dim];
    for (g, &(a, off, dim)) in from.blocks.iter().enumerate() {
        if dim == 0 {
            continue;
        }
        let slice = &v[off..off + dim];
        if slice.iter().all(|e| field.is_zero(e)) {
            continue;
        }
        let act = ring.var_action(var, d - a);
        let (_, to_off, to_dim) = to.blocks[g];
        debug_assert_eq!(act.rows(), to_dim);
        for (c, e) in slice.iter().enumerate() {
            if field.is_zero(e) {
                continue;
            }
            for r in 0..to_dim {
                let m = act.at(r, c);
                if field.is_zero(m) {
                    continue;
                }
                let prod = field.mul(m, e);
                let slot = &mut out[to_off + r];
                *slot = field.add(slot, &prod);
            }
        }
    }
    out
}

/// One syzygy step: a minimal homogeneous map g with image(g) = ker(map)
/// in every internal degree <= d_bound.
///
/// Degrees are processed in order. At degree d the space m.Ker is spanned
/// by the variables applied to the kernel at degree d-1, so new minimal
/// generators are exactly the kernel vectors that extend that span
/// (Nakayama). Vectors are compared in the free coordinates of the kernel,
/// which identifies ker_d with k^(nullity) at no cost.
pub fn kernel_step<F: Field>(
    ring: &QuotientRing<F>,
    map: &ModuleMap<F>,
    d_bound: usize,
) -> ModuleMap<F> {
    let field = ring.field().clone();
    let nvars = ring.descriptor().num_vars();
    let src = &map.source;
    let mut gen_data: Vec<(usize, Vec<F::Elem>)> = Vec::new();
    if src.rank() == 0 {
        return ModuleMap::empty(src.clone(), nvars);
    }
    let dmin = src.twists.iter().copied().min().unwrap();
    let mut prev_kernel: Vec<Vec<F::Elem>> = Vec::new();
    let mut prev_layout: Option<PieceLayout> = None;
    for d in dmin..=d_bound {
        let layout = src.piece_layout(ring, d);
        if layout.dim == 0 {
            prev_kernel = Vec::new();
            prev_layout = Some(layout);
            continue;
        }
        let a = map.piece_matrix(ring, d);
        let rref = a.rref();
        let (kernel, free_cols) = a.kernel_basis_from(&rref);
        let nullity = kernel.cols();
        let mut span = Echelon::new(field.clone(), nullity);
        if nullity > 0 {
            if let Some(pl) = &prev_layout {
                'candidates: for w in &prev_kernel {
                    for var in 0..nvars {
                        let cand = apply_variable(ring, pl, &layout, var, w, d - 1);
                        let cand_free: Vec<F::Elem> =
                            free_cols.iter().map(|&c| cand[c].clone()).collect();
                        span.absorb(cand_free);
                        if span.is_full() {
                            break 'candidates;
                        }
                    }
                }
            }
            if !span.is_full() {
                for idx in 0..nullity {
                    let mut unit = vec![field.zero(); nullity];
                    unit[idx] = field.one();
                    if span.absorb(unit) {
                        gen_data.push((d, kernel.column(idx)));
                    }
                    if span.is_full() {
                        break;
                    }
                }
            }
        }
        prev_kernel = (0..nullity).map(|c| kernel.column(c)).collect();
        prev_layout = Some(layout);
    }
    assemble_map(ring, src, gen_data)
}

/// Turn coordinate vectors over source pieces into a homogeneous
/// polynomial map into `source`.
fn assemble_map<F: Field>(
    ring: &QuotientRing<F>,
    source: &FreeModule,
    gen_data: Vec<(usize, Vec<F::Elem>)>,
) -> ModuleMap<F> {
    let field = ring.field().clone();
    let nvars = ring.descriptor().num_vars();
    let twists: Vec<usize> = gen_data.iter().map(|(d, _)| *d).collect();
    let rank = source.rank();
    let mut entries = vec![Polynomial::zero(nvars); rank * twists.len()];
    for (col, (d, coords)) in gen_data.iter().enumerate() {
        let layout = source.piece_layout(ring, *d);
        for (g, &(a, off, dim)) in layout.blocks.iter().enumerate() {
            if dim == 0 {
                continue;
            }
            let piece = ring.piece(d - a);
            let mut poly = Polynomial::zero(nvars);
            for q in 0..dim {
                let c = &coords[off + q];
                if field.is_zero(c) {
                    continue;
                }
                poly = poly.add(
                    &field,
                    &Polynomial::monomial(&field, piece.basis[q].clone(), c.clone()),
                );
            }
            entries[g * twists.len() + col] = poly;
        }
    }
    ModuleMap {
        source: FreeModule::new(twists),
        target: source.clone(),
        entries,
    }
}

/// A minimal generating subset of the image of `map`, as a submap. Columns
/// are scanned by ascending twist; a column is kept iff it extends the
/// degree-d span of the submodule generated by the columns already kept.
pub fn minimal_image_generators<F: Field>(
    ring: &QuotientRing<F>,
    map: &ModuleMap<F>,
    d_bound: usize,
) -> Result<ModuleMap<F>> {
    let field = ring.field().clone();
    let mut by_twist: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (j, &b) in map.source.twists.iter().enumerate() {
        by_twist.entry(b).or_default().push(j);
    }
    let mut kept: Vec<usize> = Vec::new();
    for (&d, cols) in &by_twist {
        if d > d_bound {
            return Err(EngineError::DegreeBoundExceeded {
                step: 1,
                bound: d_bound,
                detail: format!("relation of degree {d} lies beyond the internal bound"),
            });
        }
        let target_layout = map.target.piece_layout(ring, d);
        let mut span = Echelon::new(field.clone(), target_layout.dim);
        if !kept.is_empty() {
            let sub = map.submap(&kept);
            let m = sub.piece_matrix(ring, d);
            for c in 0..m.cols() {
                span.absorb(m.column(c));
                if span.is_full() {
                    break;
                }
            }
        }
        for &j in cols {
            // the column itself as an element of (target)_d
            let mut v = vec![field.zero(); target_layout.dim];
            for (i, &(a, off, dim)) in target_layout.blocks.iter().enumerate() {
                if dim == 0 {
                    continue;
                }
                let e = map.entry(i, j);
                if e.is_zero() {
                    continue;
                }
                let coords = ring.piece(d - a).reduce(&field, e);
                v[off..off + dim].clone_from_slice(&coords);
            }
            if span.absorb(v) {
                kept.push(j);
            }
        }
        kept.sort_unstable_by_key(|&j| (map.source.twists[j], j));
    }
    Ok(map.submap(&kept))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{Field, Rationals};
    use crate::poly::parse_polynomial;

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
    fn piece_matrix_of_zero_and_identity_maps() {
        let r = ring(&["x", "y"], &["x^2", "y^2"]);
        let f = Rationals;
        // zero map R(-1) -> R(0)
        let zero = ModuleMap::new(
            FreeModule::new(vec![1]),
            FreeModule::new(vec![0]),
            vec![Polynomial::zero(2)],
        )
        .unwrap();
        let m = zero.piece_matrix(&r, 2);
        assert!(m.is_zero());
        assert_eq!((m.rows(), m.cols()), (1, 2));
        // identity on R(0) at degree 1
        let id = ModuleMap::new(
            FreeModule::new(vec![0]),
            FreeModule::new(vec![0]),
            vec![Polynomial::one(&f, 2)],
        )
        .unwrap();
        assert_eq!(id.piece_matrix(&r, 1), DenseMatrix::identity(Rationals, 2));
    }

    #[test]
    fn piece_matrix_multiplication_by_x() {
        // map R(-1) -> R(0) given by x, at degree 2 over Q[x,y]/(x^2,y^2)
        let r = ring(&["x", "y"], &["x^2", "y^2"]);
        let f = Rationals;
        let x = parse_polynomial(&f, &["x".into(), "y".into()], "x").unwrap();
        let map = ModuleMap::new(
            FreeModule::new(vec![1]),
            FreeModule::new(vec![0]),
            vec![x],
        )
        .unwrap();
        let m = map.piece_matrix(&r, 2);
        assert_eq!((m.rows(), m.cols()), (1, 2));
        assert!(f.is_zero(m.at(0, 0)));
        assert!(f.is_one(m.at(0, 1)));
    }

    #[test]
    fn module_dims_of_ring_and_residue_field() {
        let r = ring(&["x", "y", "u", "v"], &["x*u + y*v"]);
        let free = ModuleRealization::new(
            Arc::clone(&r),
            GradedPresentation::ring_module("R", 4),
        );
        for d in 0..4 {
            assert_eq!(free.dim(d), r.dim(d));
        }
        let k = ModuleRealization::new(Arc::clone(&r), GradedPresentation::residue_field(&r));
        assert_eq!(k.dim(0), 1);
        assert_eq!(k.dim(1), 0);
        assert_eq!(k.dim(3), 0);
    }

    #[test]
    fn quotient_module_dims_match_polynomial_subring() {
        // M = R/(y,u) over R = Q[x,y,z,u]/(xy,zu) has the dimensions of
        // k[x,z]: 1, 2, 3, 4, ...
        let r = ring(&["x", "y", "z", "u"], &["x*y", "z*u"]);
        let m = quotient_module(&r, "M", &["y", "u"]);
        let real = ModuleRealization::new(Arc::clone(&r), m);
        for d in 0..6 {
            assert_eq!(real.dim(d), d as usize + 1, "degree {d}");
        }
    }

    #[test]
    fn kernel_step_of_injective_map_is_empty() {
        let r = ring(&["x", "y"], &["x^2", "y^2"]);
        let f = Rationals;
        let id = ModuleMap::new(
            FreeModule::new(vec![0]),
            FreeModule::new(vec![0]),
            vec![Polynomial::one(&f, 2)],
        )
        .unwrap();
        let g = kernel_step(&r, &id, 6);
        assert_eq!(g.source.rank(), 0);
    }

    #[test]
    fn kernel_step_multiplication_by_x_on_dual_numbers() {
        // ker(x : R(-1) -> R) over R = Q[x]/(x^2) is generated by x in
        // degree 2.
        let r = ring(&["x"], &["x^2"]);
        let f = Rationals;
        let x = parse_polynomial(&f, &["x".into()], "x").unwrap();
        let map = ModuleMap::new(
            FreeModule::new(vec![1]),
            FreeModule::new(vec![0]),
            vec![x.clone()],
        )
        .unwrap();
        let g = kernel_step(&r, &map, 8);
        assert_eq!(g.source.twists, vec![2]);
        assert_eq!(g.entry(0, 0), &x);
    }

    #[test]
    fn kernel_step_output_is_exact_and_minimal() {
        // map (x, y): R(-1)^2 -> R over Q[x,y]/(x^2,y^2)
        let r = ring(&["x", "y"], &["x^2", "y^2"]);
        let f = Rationals;
        let names = vec!["x".to_string(), "y".to_string()];
        let x = parse_polynomial(&f, &names, "x").unwrap();
        let y = parse_polynomial(&f, &names, "y").unwrap();
        let map = ModuleMap::new(
            FreeModule::new(vec![1, 1]),
            FreeModule::new(vec![0]),
            vec![x, y],
        )
        .unwrap();
        let g = kernel_step(&r, &map, 8);
        // composite reduces to zero and the exactness audit holds
        let comp = map.compose(&f, &g).unwrap();
        assert!(comp.reduces_to_zero(&r));
        assert!(g.entries_in_irrelevant_ideal());
        for d in 0..=6 {
            let a = map.piece_matrix(&r, d);
            let b = g.piece_matrix(&r, d);
            let nullity = a.cols() - a.rank();
            assert_eq!(b.rank(), nullity, "kernel dimension at degree {d}");
            assert!(a.mul(&b).is_zero());
        }
    }

    #[test]
    fn minimal_image_generators_drop_redundant_columns() {
        // columns x, y, x + y over Q[x,y]: the third is redundant
        let r = ring(&["x", "y"], &[]);
        let f = Rationals;
        let names = vec!["x".to_string(), "y".to_string()];
        let x = parse_polynomial(&f, &names, "x").unwrap();
        let y = parse_polynomial(&f, &names, "y").unwrap();
        let xy = parse_polynomial(&f, &names, "x + y").unwrap();
        let map = ModuleMap::new(
            FreeModule::new(vec![1, 1, 1]),
            FreeModule::new(vec![0]),
            vec![x.clone(), y.clone(), xy],
        )
        .unwrap();
        let min = minimal_image_generators(&r, &map, 6).unwrap();
        assert_eq!(min.source.rank(), 2);
        assert_eq!(min.entry(0, 0), &x);
        assert_eq!(min.entry(0, 1), &y);
    }

    #[test]
    fn strip_units_removes_redundant_generators() {
        // M presented by gens e0 (deg 0), e1 (deg 1) with relation
        // x e0 - 1 e1 = 0, i.e. e1 = x e0: stripping leaves one generator
        // with no relations.
        let r = ring(&["x", "y"], &[]);
        let f = Rationals;
        let names = vec!["x".to_string(), "y".to_string()];
        let x = parse_polynomial(&f, &names, "x").unwrap();
        let minus_one = Polynomial::constant(&f, 2, f.from_i64(-1));
        let rel = ModuleMap::new(
            FreeModule::new(vec![1]),
            FreeModule::new(vec![0, 1]),
            vec![x, minus_one],
        )
        .unwrap();
        let pres = GradedPresentation::new("M", rel);
        let stripped = strip_units(&f, &pres);
        assert_eq!(stripped.generators.twists, vec![0]);
        assert_eq!(stripped.relations.source.rank(), 0);
        let _ = r;
    }

    #[test]
    fn rationality_of_module_hilbert_function() {
        // the v-fold difference of dims vanishes for large degree
        let r = ring(&["x", "y", "z", "u"], &["x*y", "z*u"]);
        let m = quotient_module(&r, "M", &["y", "u"]);
        let real = ModuleRealization::new(Arc::clone(&r), m);
        let dims: Vec<i64> = (0..12).map(|d| real.dim(d) as i64).collect();
        let mut seq = dims;
        for _ in 0..4 {
            seq = seq.windows(2).map(|w| w[1] - w[0]).collect();
        }
        // after v = 4 differences, entries vanish past the relation degrees
        assert!(seq[4..].iter().all(|&e| e == 0), "sequence {seq:?}");
    }
}
