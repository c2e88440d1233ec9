//! Finite-dimensional representations of a bound quiver and the linear
//! algebra around them: homs, kernels, covers, resolutions, Ext.

use std::fmt::Write as _;

use rand::Rng;
use thiserror::Error;

use crate::field::Field;
use crate::matrix::{quotient_reps, Matrix, Span};
use crate::pathcat::{PathCatError, PathCategory};
use crate::quiver::{Path, Presentation, Quiver, Relation};
use crate::text::{check_total_dim, content_lines, parse_dim, parse_matrix, shaped, split_assignment, TextError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModuleError {
    #[error("expected {expected} vertex dimensions, got {got}")]
    DimCount { expected: usize, got: usize },
    #[error("expected {expected} arrow matrices, got {got}")]
    ActionCount { expected: usize, got: usize },
    #[error("arrow `{arrow}` acts by a {got:?} matrix; expected {expected:?}")]
    Shape { arrow: String, expected: (usize, usize), got: (usize, usize) },
    #[error("relation `{0}` does not act as zero")]
    RelationNonzero(String),
    #[error("map is not a module homomorphism at arrow `{0}`")]
    NotHomomorphism(String),
    #[error("resolution still running after {0} steps")]
    WindowLimited(usize),
    #[error(transparent)]
    PathCat(#[from] PathCatError),
}

/// A representation: a vector space per vertex and a matrix per arrow.
#[derive(Debug, Clone, PartialEq)]
pub struct Module<F> {
    dims: Vec<usize>,
    actions: Vec<Matrix<F>>,
}

/// A family of linear maps, one per vertex.
#[derive(Debug, Clone, PartialEq)]
pub struct ModuleMap<F> {
    pub maps: Vec<Matrix<F>>,
}

impl<F: Field> Module<F> {
    /// Checks shapes against the quiver; relations are checked by
    /// [`Module::check_relations`].
    pub fn new(q: &Quiver, dims: Vec<usize>, actions: Vec<Matrix<F>>) -> Result<Self, ModuleError> {
        if dims.len() != q.num_vertices() {
            return Err(ModuleError::DimCount { expected: q.num_vertices(), got: dims.len() });
        }
        if actions.len() != q.num_arrows() {
            return Err(ModuleError::ActionCount { expected: q.num_arrows(), got: actions.len() });
        }
        for (a, m) in q.arrows().iter().zip(&actions) {
            let expected = (dims[a.target], dims[a.source]);
            if (m.rows(), m.cols()) != expected {
                return Err(ModuleError::Shape { arrow: a.id.clone(), expected, got: (m.rows(), m.cols()) });
            }
        }
        Ok(Module { dims, actions })
    }

    /// Pulls back along a quiver map given by `vertices[k]` (old vertex of
    /// new vertex `k`) and `arrows[k]` (old arrow of new arrow `k`).
    pub fn restrict(&self, vertices: &[usize], arrows: &[usize]) -> Module<F> {
        Module {
            dims: vertices.iter().map(|&v| self.dims[v]).collect(),
            actions: arrows.iter().map(|&a| self.actions[a].clone()).collect(),
        }
    }

    /// A quotient of `P_v` by the submodule generated by `relations`
    /// random radical elements with entries in `-2..=2`; the top survives.
    pub fn random_quotient<R: Rng>(cat: &PathCategory<F>, v: usize, relations: usize, rng: &mut R) -> Result<Self, ModuleError> {
        let q = cat.quiver();
        let proj = cat.projective(v)?;
        let unit = proj.basis[v].iter().position(Path::is_trivial);
        let p = Module::projective(cat, v)?;
        let support: Vec<usize> = p.support();
        let mut gens = Vec::new();
        for _ in 0..relations {
            let w = support[rng.gen_range(0..support.len())];
            let mut elt: Vec<F> = (0..p.dims[w]).map(|_| F::from_i64(rng.gen_range(-2..=2))).collect();
            if w == v {
                if let Some(k) = unit {
                    elt[k] = F::zero();
                }
            }
            gens.push((w, elt));
        }
        let spans = p.generate(q, &gens);
        Ok(p.quotient(q, &spans).0)
    }

    pub fn zero(q: &Quiver) -> Self {
        Module { dims: vec![0; q.num_vertices()], actions: vec![Matrix::zeros(0, 0); q.num_arrows()] }
    }

    pub fn simple(q: &Quiver, v: usize) -> Self {
        let mut dims = vec![0; q.num_vertices()];
        dims[v] = 1;
        let actions = q.arrows().iter().map(|a| Matrix::zeros(dims[a.target], dims[a.source])).collect();
        Module { dims, actions }
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn dim(&self, v: usize) -> usize {
        self.dims[v]
    }

    pub fn total_dim(&self) -> usize {
        self.dims.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.dims.iter().all(|&d| d == 0)
    }

    pub fn action(&self, arrow: usize) -> &Matrix<F> {
        &self.actions[arrow]
    }

    pub fn actions(&self) -> &[Matrix<F>] {
        &self.actions
    }

    pub fn num_vertices(&self) -> usize {
        self.dims.len()
    }

    pub fn support(&self) -> Vec<usize> {
        (0..self.dims.len()).filter(|&v| self.dims[v] > 0).collect()
    }

    /// The matrix by which a path acts.
    pub fn eval_path(&self, path: &Path) -> Matrix<F> {
        let mut m = Matrix::identity(self.dims[path.source]);
        for &a in &path.arrows {
            m = self.actions[a].mul(&m);
        }
        m
    }

    pub fn eval_relation(&self, r: &Relation<F>) -> Matrix<F> {
        let mut m = Matrix::zeros(self.dims[r.target()], self.dims[r.source()]);
        for (c, p) in r.terms() {
            m = m.add(&self.eval_path(p).scale(c));
        }
        m
    }

    pub fn check_relations(&self, pres: &Presentation<F>) -> Result<(), ModuleError> {
        for r in &pres.relations {
            if !self.eval_relation(r).is_zero() {
                return Err(ModuleError::RelationNonzero(r.display(&pres.quiver).to_string()));
            }
        }
        Ok(())
    }

    /// Representation `v -> Hom(a, v)` of the projective at `a`.
    pub fn projective(cat: &PathCategory<F>, a: usize) -> Result<Self, ModuleError> {
        let p = cat.projective(a)?;
        Ok(Module { dims: p.dims(), actions: p.actions.clone() })
    }

    /// Direct sum of projectives at the listed vertices (with repetition).
    pub fn projective_sum(cat: &PathCategory<F>, vertices: &[usize]) -> Result<Self, ModuleError> {
        let parts = vertices.iter().map(|&v| Module::projective(cat, v)).collect::<Result<Vec<_>, _>>()?;
        Ok(direct_sum(cat.quiver(), &parts))
    }

    pub fn identity(&self) -> ModuleMap<F> {
        ModuleMap { maps: self.dims.iter().map(|&d| Matrix::identity(d)).collect() }
    }

    pub fn zero_map_to(&self, other: &Module<F>) -> ModuleMap<F> {
        ModuleMap { maps: self.dims.iter().zip(&other.dims).map(|(&a, &b)| Matrix::zeros(b, a)).collect() }
    }

    /// Whether `f` intertwines the actions of `self` and `other`.
    pub fn is_homomorphism(&self, other: &Module<F>, f: &ModuleMap<F>, q: &Quiver) -> Result<(), ModuleError> {
        for (x, a) in q.arrows().iter().enumerate() {
            let lhs = f.maps[a.target].mul(&self.actions[x]);
            let rhs = other.actions[x].mul(&f.maps[a.source]);
            if lhs != rhs {
                return Err(ModuleError::NotHomomorphism(a.id.clone()));
            }
        }
        Ok(())
    }

    /// Submodule with the given per-vertex column bases, which must be
    /// independent and closed under the actions.
    pub fn submodule(&self, q: &Quiver, spans: &[Matrix<F>]) -> (Module<F>, ModuleMap<F>) {
        let dims: Vec<usize> = spans.iter().map(Matrix::cols).collect();
        let actions = q
            .arrows()
            .iter()
            .enumerate()
            .map(|(x, a)| {
                let moved = self.actions[x].mul(&spans[a.source]);
                spans[a.target].solve_matrix(&moved).expect("span is closed under the action")
            })
            .collect();
        (Module { dims, actions }, ModuleMap { maps: spans.to_vec() })
    }

    /// Quotient by the submodule with the given per-vertex spanning columns.
    pub fn quotient(&self, q: &Quiver, spans: &[Matrix<F>]) -> (Module<F>, ModuleMap<F>) {
        let quots: Vec<_> = spans.iter().zip(&self.dims).map(|(s, &d)| quotient_reps(d, s)).collect();
        let dims = quots.iter().map(|qq| qq.reps.len()).collect();
        let actions = q
            .arrows()
            .iter()
            .enumerate()
            .map(|(x, a)| quots[a.target].project.mul(&self.actions[x].select_cols(&quots[a.source].reps)))
            .collect();
        (Module { dims, actions }, ModuleMap { maps: quots.into_iter().map(|qq| qq.project).collect() })
    }

    /// Smallest submodule containing the given vectors.
    pub fn generate(&self, q: &Quiver, gens: &[(usize, Vec<F>)]) -> Vec<Matrix<F>> {
        let mut spans: Vec<Span<F>> = self.dims.iter().map(|&d| Span::new(d)).collect();
        let mut work = Vec::new();
        for (v, g) in gens {
            if spans[*v].insert(g) {
                work.push((*v, g.clone()));
            }
        }
        while let Some((v, w)) = work.pop() {
            for x in q.arrows_from(v) {
                let t = q.arrow(x).target;
                let image = self.actions[x].mul_vec(&w);
                if spans[t].insert(&image) {
                    work.push((t, image));
                }
            }
        }
        spans.iter().map(Span::basis).collect()
    }

    /// Per-vertex bases of the radical: the sum of the images of the arrows.
    pub fn radical_spans(&self, q: &Quiver) -> Vec<Matrix<F>> {
        (0..self.dims.len())
            .map(|v| {
                let parts: Vec<&Matrix<F>> = q.arrows_into(v).map(|x| &self.actions[x]).collect();
                if parts.is_empty() {
                    Matrix::zeros(self.dims[v], 0)
                } else {
                    Matrix::hstack(&parts, self.dims[v]).image()
                }
            })
            .collect()
    }

    pub fn radical(&self, q: &Quiver) -> (Module<F>, ModuleMap<F>) {
        self.submodule(q, &self.radical_spans(q))
    }

    pub fn top(&self, q: &Quiver) -> (Module<F>, ModuleMap<F>) {
        self.quotient(q, &self.radical_spans(q))
    }

    /// Dimension of the top at each vertex.
    pub fn top_dims(&self, q: &Quiver) -> Vec<usize> {
        self.radical_spans(q).iter().zip(&self.dims).map(|(r, &d)| d - r.cols()).collect()
    }

    /// Minimal projective cover. Generators are standard basis vectors
    /// completing the radical.
    pub fn projective_cover(&self, cat: &PathCategory<F>) -> Result<Cover<F>, ModuleError> {
        let q = cat.quiver();
        let rad = self.radical_spans(q);
        let mut generators = Vec::new();
        for v in 0..self.dims.len() {
            for r in quotient_reps(self.dims[v], &rad[v]).reps {
                let mut e = vec![F::zero(); self.dims[v]];
                e[r] = F::one();
                generators.push((v, e));
            }
        }
        self.cover_from(cat, generators)
    }

    /// The map from a sum of projectives sending each trivial path to the
    /// given element.
    pub fn cover_from(&self, cat: &PathCategory<F>, generators: Vec<(usize, Vec<F>)>) -> Result<Cover<F>, ModuleError> {
        let vertices: Vec<usize> = generators.iter().map(|(v, _)| *v).collect();
        let projective = Module::projective_sum(cat, &vertices)?;
        let mut maps: Vec<Matrix<F>> = Vec::with_capacity(self.dims.len());
        for w in 0..self.dims.len() {
            let mut cols = Vec::new();
            for (v, g) in &generators {
                let p = cat.projective(*v)?;
                for rep in &p.basis[w] {
                    cols.push(self.eval_path(rep).mul_vec(g));
                }
            }
            maps.push(Matrix::from_cols(&cols, self.dims[w]));
        }
        Ok(Cover { generators: vertices, elements: generators.into_iter().map(|(_, g)| g).collect(), projective, map: ModuleMap { maps } })
    }
}

/// A map `⊕ P_{v_i} -> M` given by elements `m_i ∈ M(v_i)`.
#[derive(Debug, Clone)]
pub struct Cover<F> {
    pub generators: Vec<usize>,
    pub elements: Vec<Vec<F>>,
    pub projective: Module<F>,
    pub map: ModuleMap<F>,
}

impl<F: Field> ModuleMap<F> {
    /// `self ∘ other`.
    pub fn compose(&self, other: &ModuleMap<F>) -> ModuleMap<F> {
        ModuleMap { maps: self.maps.iter().zip(&other.maps).map(|(a, b)| a.mul(b)).collect() }
    }

    pub fn add(&self, other: &ModuleMap<F>) -> ModuleMap<F> {
        ModuleMap { maps: self.maps.iter().zip(&other.maps).map(|(a, b)| a.add(b)).collect() }
    }

    pub fn scale(&self, c: &F) -> ModuleMap<F> {
        ModuleMap { maps: self.maps.iter().map(|a| a.scale(c)).collect() }
    }

    pub fn is_zero(&self) -> bool {
        self.maps.iter().all(Matrix::is_zero)
    }

    pub fn is_injective(&self) -> bool {
        self.maps.iter().all(|m| m.rank() == m.cols())
    }

    pub fn is_surjective(&self) -> bool {
        self.maps.iter().all(|m| m.rank() == m.rows())
    }

    pub fn is_iso(&self) -> bool {
        self.maps.iter().all(|m| m.rows() == m.cols() && m.rank() == m.cols())
    }

    pub fn rank(&self) -> usize {
        self.maps.iter().map(Matrix::rank).sum()
    }

    pub fn kernel(&self, q: &Quiver, domain: &Module<F>) -> (Module<F>, ModuleMap<F>) {
        let spans: Vec<Matrix<F>> = self.maps.iter().map(Matrix::kernel).collect();
        domain.submodule(q, &spans)
    }

    pub fn image(&self, q: &Quiver, codomain: &Module<F>) -> (Module<F>, ModuleMap<F>) {
        let spans: Vec<Matrix<F>> = self.maps.iter().map(Matrix::image).collect();
        codomain.submodule(q, &spans)
    }

    pub fn cokernel(&self, q: &Quiver, codomain: &Module<F>) -> (Module<F>, ModuleMap<F>) {
        let spans: Vec<Matrix<F>> = self.maps.iter().map(Matrix::image).collect();
        codomain.quotient(q, &spans)
    }
}

/// Direct sum; basis at each vertex is the concatenation of the summands'.
pub fn direct_sum<F: Field>(q: &Quiver, parts: &[Module<F>]) -> Module<F> {
    let nv = q.num_vertices();
    let dims: Vec<usize> = (0..nv).map(|v| parts.iter().map(|m| m.dims[v]).sum()).collect();
    let actions = q
        .arrows()
        .iter()
        .enumerate()
        .map(|(x, a)| {
            let mut m = Matrix::zeros(dims[a.target], dims[a.source]);
            let (mut r, mut c) = (0, 0);
            for p in parts {
                m.set_block(r, c, &p.actions[x]);
                r += p.dims[a.target];
                c += p.dims[a.source];
            }
            m
        })
        .collect();
    Module { dims, actions }
}

/// Inclusion of the `k`-th summand of [`direct_sum`].
pub fn summand_inclusion<F: Field>(parts: &[Module<F>], k: usize) -> ModuleMap<F> {
    let nv = parts.first().map_or(0, |m| m.dims.len());
    let maps = (0..nv)
        .map(|v| {
            let total: usize = parts.iter().map(|m| m.dims[v]).sum();
            let before: usize = parts[..k].iter().map(|m| m.dims[v]).sum();
            let mut m = Matrix::zeros(total, parts[k].dims[v]);
            m.set_block(before, 0, &Matrix::identity(parts[k].dims[v]));
            m
        })
        .collect();
    ModuleMap { maps }
}

/// Projection onto the `k`-th summand of [`direct_sum`].
pub fn summand_projection<F: Field>(parts: &[Module<F>], k: usize) -> ModuleMap<F> {
    let inc = summand_inclusion(parts, k);
    ModuleMap { maps: inc.maps.iter().map(Matrix::transpose).collect() }
}

/// Basis of `Hom(a, b)` as module maps.
pub fn hom_modules<F: Field>(q: &Quiver, a: &Module<F>, b: &Module<F>) -> Vec<ModuleMap<F>> {
    let nv = a.dims.len();
    let mut offset = vec![0usize; nv + 1];
    for v in 0..nv {
        offset[v + 1] = offset[v] + a.dims[v] * b.dims[v];
    }
    let unknowns = offset[nv];
    if unknowns == 0 {
        return Vec::new();
    }
    // f_v is dim b(v) x dim a(v); entry (i, j) is unknown offset[v] + i * dim a(v) + j.
    let var = |v: usize, i: usize, j: usize| offset[v] + i * a.dims[v] + j;
    let mut rows: Vec<Vec<F>> = Vec::new();
    for (x, arrow) in q.arrows().iter().enumerate() {
        let (u, w) = (arrow.source, arrow.target);
        let (am, bm) = (&a.actions[x], &b.actions[x]);
        for i in 0..b.dims[w] {
            for j in 0..a.dims[u] {
                let mut row = vec![F::zero(); unknowns];
                let mut any = false;
                for k in 0..a.dims[w] {
                    let c = am.get(k, j);
                    if !c.is_zero() {
                        row[var(w, i, k)] = row[var(w, i, k)].add(c);
                        any = true;
                    }
                }
                for k in 0..b.dims[u] {
                    let c = bm.get(i, k);
                    if !c.is_zero() {
                        row[var(u, k, j)] = row[var(u, k, j)].sub(c);
                        any = true;
                    }
                }
                if any {
                    rows.push(row);
                }
            }
        }
    }
    let kernel = if rows.is_empty() { Matrix::identity(unknowns) } else { Matrix::from_rows(rows, unknowns).kernel() };
    (0..kernel.cols())
        .map(|c| {
            let maps = (0..nv)
                .map(|v| {
                    let mut m = Matrix::zeros(b.dims[v], a.dims[v]);
                    for i in 0..b.dims[v] {
                        for j in 0..a.dims[v] {
                            m.set(i, j, kernel.get(var(v, i, j), c).clone());
                        }
                    }
                    m
                })
                .collect();
            ModuleMap { maps }
        })
        .collect()
}

pub fn hom_dim<F: Field>(q: &Quiver, a: &Module<F>, b: &Module<F>) -> usize {
    hom_modules(q, a, b).len()
}

/// Sum of the images of all maps from the generators into `m`.
pub fn trace_submodule<F: Field>(q: &Quiver, gens: &[Module<F>], m: &Module<F>) -> Vec<Matrix<F>> {
    let mut spans: Vec<Span<F>> = m.dims.iter().map(|&d| Span::new(d)).collect();
    for g in gens {
        for f in hom_modules(q, g, m) {
            for (v, fv) in f.maps.iter().enumerate() {
                for col in fv.col_vectors() {
                    spans[v].insert(&col);
                }
            }
        }
    }
    spans.iter().map(Span::basis).collect()
}

/// Trace of the projectives at `vertices`: the submodule generated by `m`
/// at those vertices.
pub fn trace_of_projectives<F: Field>(q: &Quiver, vertices: &[usize], m: &Module<F>) -> Vec<Matrix<F>> {
    let mut gens = Vec::new();
    for &v in vertices {
        for k in 0..m.dims[v] {
            let mut e = vec![F::zero(); m.dims[v]];
            e[k] = F::one();
            gens.push((v, e));
        }
    }
    m.generate(q, &gens)
}

/// A projective resolution `… -> P_1 -> P_0 -> M`.
#[derive(Debug, Clone)]
pub struct Resolution<F> {
    /// Generator vertices of each `P_i`.
    pub generators: Vec<Vec<usize>>,
    pub terms: Vec<Module<F>>,
    /// `differentials[0]` is the augmentation `P_0 -> M`; `differentials[i]`
    /// is `P_i -> P_{i-1}` for `i >= 1`.
    pub differentials: Vec<ModuleMap<F>>,
    /// Whether the last computed syzygy is zero.
    pub complete: bool,
}

impl<F: Field> Resolution<F> {
    /// Projective dimension if the resolution finished.
    pub fn length(&self) -> Option<usize> {
        if !self.complete {
            return None;
        }
        Some(self.terms.iter().rposition(|t| !t.is_zero()).unwrap_or(0))
    }
}

/// Minimal resolution with at most `steps + 1` terms.
pub fn resolve<F: Field>(cat: &PathCategory<F>, m: &Module<F>, steps: usize) -> Result<Resolution<F>, ModuleError> {
    let q = cat.quiver();
    let cover = m.projective_cover(cat)?;
    let (mut syzygy, mut incl) = cover.map.kernel(q, &cover.projective);
    let mut res = Resolution {
        generators: vec![cover.generators],
        terms: vec![cover.projective],
        differentials: vec![cover.map],
        complete: false,
    };
    for _ in 0..steps {
        if syzygy.is_zero() {
            res.complete = true;
            return Ok(res);
        }
        let cover = syzygy.projective_cover(cat)?;
        let d = incl.compose(&cover.map);
        let (next, next_incl) = cover.map.kernel(q, &cover.projective);
        res.generators.push(cover.generators);
        res.terms.push(cover.projective);
        res.differentials.push(d);
        syzygy = next;
        incl = next_incl;
    }
    res.complete = syzygy.is_zero();
    Ok(res)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ProjDim {
    Exact(usize),
    /// The resolution had not stopped after this many steps.
    WindowLimited(usize),
}

pub fn projective_dimension<F: Field>(cat: &PathCategory<F>, m: &Module<F>, cap: usize) -> Result<ProjDim, ModuleError> {
    if m.is_zero() {
        return Ok(ProjDim::Exact(0));
    }
    let res = resolve(cat, m, cap)?;
    Ok(match res.length() {
        Some(d) => ProjDim::Exact(d),
        None => ProjDim::WindowLimited(cap),
    })
}

/// `Ext^j(a, b)` with cocycles in `Hom(P_j, b) = ⊕ b(v_g)`.
#[derive(Debug, Clone)]
pub struct ExtGroup<F> {
    pub degree: usize,
    pub dim: usize,
    /// Cocycles spanning a complement of the coboundaries, as columns.
    pub cocycles: Matrix<F>,
}

/// Matrix of `Hom(P_{i-1}, b) -> Hom(P_i, b)` induced by the differential.
fn cochain_map<F: Field>(cat: &PathCategory<F>, res: &Resolution<F>, i: usize, b: &Module<F>) -> Result<Matrix<F>, ModuleError> {
    let src_gens = &res.generators[i - 1];
    let dst_gens = &res.generators[i];
    let src_dim: usize = src_gens.iter().map(|&v| b.dim(v)).sum();
    let dst_dim: usize = dst_gens.iter().map(|&v| b.dim(v)).sum();
    let mut m = Matrix::zeros(dst_dim, src_dim);
    let d = &res.differentials[i];
    let mut row = 0;
    for (h, &w) in dst_gens.iter().enumerate() {
        // Image of the trivial path of generator h, inside P_{i-1}(w).
        let before: usize = dst_gens[..h].iter().map(|&u| cat.projective(u).map(|p| p.dim(w))).sum::<Result<usize, _>>()?;
        let pw = cat.projective(w)?;
        let eps = pw.basis[w].iter().position(Path::is_trivial).expect("trivial path survives");
        let image = d.maps[w].col(before + eps);
        let mut col = 0;
        let mut pos = 0;
        for &v in src_gens {
            let pv = cat.projective(v)?;
            let mut block = Matrix::zeros(b.dim(w), b.dim(v));
            for (k, rep) in pv.basis[w].iter().enumerate() {
                let c = &image[pos + k];
                if !c.is_zero() {
                    block = block.add(&b.eval_path(rep).scale(c));
                }
            }
            pos += pv.dim(w);
            m.set_block(row, col, &block);
            col += b.dim(v);
        }
        row += b.dim(w);
    }
    Ok(m)
}

/// `Ext^j(a, b)` over the window algebra, from a minimal resolution of `a`.
pub fn ext<F: Field>(cat: &PathCategory<F>, a: &Module<F>, b: &Module<F>, j: usize) -> Result<ExtGroup<F>, ModuleError> {
    let res = resolve(cat, a, j + 1)?;
    ext_from_resolution(cat, &res, b, j)
}

pub fn ext_from_resolution<F: Field>(
    cat: &PathCategory<F>,
    res: &Resolution<F>,
    b: &Module<F>,
    j: usize,
) -> Result<ExtGroup<F>, ModuleError> {
    let cochain_dim = |i: usize| -> usize {
        res.generators.get(i).map_or(0, |g| g.iter().map(|&v| b.dim(v)).sum())
    };
    let n = cochain_dim(j);
    if n == 0 {
        return Ok(ExtGroup { degree: j, dim: 0, cocycles: Matrix::zeros(0, 0) });
    }
    let cocycles = if j + 1 < res.terms.len() {
        cochain_map(cat, res, j + 1, b)?.kernel()
    } else if res.complete {
        Matrix::identity(n)
    } else {
        return Err(ModuleError::WindowLimited(res.terms.len()));
    };
    let coboundaries = if j == 0 { Matrix::zeros(n, 0) } else { cochain_map(cat, res, j, b)?.image() };
    let both = Matrix::hstack(&[&coboundaries, &cocycles], n);
    let pivots = both.rref().pivots;
    let keep: Vec<usize> = pivots.iter().filter(|&&p| p >= coboundaries.cols()).copied().collect();
    let reps = both.select_cols(&keep);
    Ok(ExtGroup { degree: j, dim: reps.cols(), cocycles: reps })
}

/// Outcome of trying to write a module as a sum of candidates.
#[derive(Debug, Clone)]
pub enum Decomposition<F> {
    /// Multiplicities together with an isomorphism from the sum.
    Found { multiplicities: Vec<usize>, iso: ModuleMap<F> },
    /// No multiplicity vector passes the necessary invariants.
    Impossible,
    /// Some multiplicity vector passes the invariants but no isomorphism
    /// was found.
    Inconclusive { multiplicities: Vec<usize> },
}

impl<F> Decomposition<F> {
    pub fn multiplicities(&self) -> Option<&[usize]> {
        match self {
            Decomposition::Found { multiplicities, .. } => Some(multiplicities),
            _ => None,
        }
    }
}

fn multiplicity_vectors(target: &[usize], cands: &[Vec<usize>]) -> Vec<Vec<usize>> {
    fn go(k: usize, rest: &mut Vec<usize>, cands: &[Vec<usize>], cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if out.len() > 10_000 {
            return;
        }
        if k == cands.len() {
            if rest.iter().all(|&r| r == 0) {
                out.push(cur.clone());
            }
            return;
        }
        let c = &cands[k];
        let max = if c.iter().all(|&d| d == 0) {
            0
        } else {
            c.iter().zip(rest.iter()).filter(|(d, _)| **d > 0).map(|(d, r)| r / d).min().unwrap_or(0)
        };
        for n in (0..=max).rev() {
            for (r, d) in rest.iter_mut().zip(c) {
                *r -= n * d;
            }
            cur.push(n);
            go(k + 1, rest, cands, cur, out);
            cur.pop();
            for (r, d) in rest.iter_mut().zip(c) {
                *r += n * d;
            }
        }
    }
    let mut out = Vec::new();
    go(0, &mut target.to_vec(), cands, &mut Vec::new(), &mut out);
    out
}

/// Tries to find `m ≅ ⊕ candidates[i]^{n_i}`.
///
/// Multiplicity vectors come from dimension vectors and are filtered by
/// hom dimensions to and from every candidate; a surviving vector is
/// certified by an explicit isomorphism, searched first among basis maps
/// and then among random combinations drawn from `rng`.
pub fn decompose_against<F: Field, R: Rng>(
    q: &Quiver,
    m: &Module<F>,
    candidates: &[Module<F>],
    rng: &mut R,
    attempts: usize,
) -> Decomposition<F> {
    let dims: Vec<Vec<usize>> = candidates.iter().map(|c| c.dims.clone()).collect();
    let vectors = multiplicity_vectors(&m.dims, &dims);
    if vectors.is_empty() {
        return Decomposition::Impossible;
    }
    let to_m: Vec<usize> = candidates.iter().map(|c| hom_dim(q, c, m)).collect();
    let from_m: Vec<usize> = candidates.iter().map(|c| hom_dim(q, m, c)).collect();
    let table: Vec<Vec<usize>> = candidates.iter().map(|a| candidates.iter().map(|b| hom_dim(q, a, b)).collect()).collect();
    let mut survivors = Vec::new();
    for n in vectors {
        let ok = (0..candidates.len()).all(|k| {
            let into: usize = (0..candidates.len()).map(|i| n[i] * table[k][i]).sum();
            let out: usize = (0..candidates.len()).map(|i| n[i] * table[i][k]).sum();
            into == to_m[k] && out == from_m[k]
        });
        if ok {
            survivors.push(n);
        }
    }
    let Some(first) = survivors.first().cloned() else {
        return Decomposition::Impossible;
    };
    for n in &survivors {
        let parts: Vec<Module<F>> =
            candidates.iter().zip(n).flat_map(|(c, &k)| std::iter::repeat_n(c.clone(), k)).collect();
        let sum = direct_sum(q, &parts);
        if let Some(iso) = find_iso(q, &sum, m, rng, attempts) {
            return Decomposition::Found { multiplicities: n.clone(), iso };
        }
    }
    Decomposition::Inconclusive { multiplicities: first }
}

/// An isomorphism `a -> b`, if the search finds one.
pub fn find_iso<F: Field, R: Rng>(q: &Quiver, a: &Module<F>, b: &Module<F>, rng: &mut R, attempts: usize) -> Option<ModuleMap<F>> {
    if a.dims != b.dims {
        return None;
    }
    if a.is_zero() {
        return Some(a.identity());
    }
    let basis = hom_modules(q, a, b);
    if basis.is_empty() {
        return None;
    }
    let mut sum = basis[0].clone();
    for f in &basis[1..] {
        sum = sum.add(f);
    }
    if sum.is_iso() {
        return Some(sum);
    }
    if let Some(f) = basis.iter().find(|f| f.is_iso()) {
        return Some(f.clone());
    }
    for _ in 0..attempts {
        let mut f = a.zero_map_to(b);
        for g in &basis {
            let c = F::from_i64(rng.gen_range(-1000..=1000));
            f = f.add(&g.scale(&c));
        }
        if f.is_iso() {
            return Some(f);
        }
    }
    None
}

/// Whether `a ≅ b`: `Some(true)` with a certificate found, `Some(false)`
/// when an invariant differs, `None` if undecided.
pub fn is_isomorphic<F: Field, R: Rng>(q: &Quiver, a: &Module<F>, b: &Module<F>, rng: &mut R) -> Option<bool> {
    match decompose_against(q, a, std::slice::from_ref(b), rng, 32) {
        Decomposition::Found { multiplicities, .. } => Some(multiplicities == [1] || (a.is_zero() && b.is_zero())),
        Decomposition::Impossible => Some(false),
        Decomposition::Inconclusive { .. } => None,
    }
}

/// Reads the module file format: `mdim <vertex> = n` and
/// `maction <arrow> = [[..]]`. Missing dimensions are 0 and missing
/// actions are zero.
pub fn parse_module<F: Field>(text: &str, q: &Quiver) -> Result<Module<F>, TextError> {
    let mut dims = vec![0usize; q.num_vertices()];
    let mut seen_dim = vec![false; q.num_vertices()];
    let mut pending: Vec<(usize, usize, Vec<Vec<F>>)> = Vec::new();
    for (line, body) in content_lines(text) {
        let (head, rhs) = split_assignment(body).ok_or_else(|| TextError::new(line, "expected `=`"))?;
        let mut words = head.split_whitespace();
        let kw = words.next().unwrap_or("");
        let id = words.next().ok_or_else(|| TextError::new(line, "missing vertex or arrow id"))?;
        if words.next().is_some() {
            return Err(TextError::new(line, "unexpected text before `=`"));
        }
        match kw {
            "mdim" => {
                let v = q.require_vertex(id).map_err(|e| TextError::new(line, e.to_string()))?;
                if seen_dim[v] {
                    return Err(TextError::new(line, format!("dimension at `{id}` given twice")));
                }
                seen_dim[v] = true;
                dims[v] = parse_dim(line, rhs)?;
            }
            "maction" => {
                let a = q.require_arrow(id).map_err(|e| TextError::new(line, e.to_string()))?;
                if pending.iter().any(|(b, _, _)| *b == a) {
                    return Err(TextError::new(line, format!("action of `{id}` given twice")));
                }
                let rows = parse_matrix(rhs).map_err(|e| TextError::new(line, e))?;
                pending.push((a, line, rows));
            }
            other => return Err(TextError::new(line, format!("unknown keyword `{other}`"))),
        }
    }
    check_total_dim(dims.iter().sum())?;
    let mut actions: Vec<Matrix<F>> = q.arrows().iter().map(|a| Matrix::zeros(dims[a.target], dims[a.source])).collect();
    for (a, line, rows) in pending {
        let arrow = q.arrow(a);
        actions[a] = shaped(rows, dims[arrow.target], dims[arrow.source]).map_err(|e| TextError::new(line, format!("`{}`: {e}", arrow.id)))?;
    }
    Ok(Module { dims, actions })
}

pub fn format_module<F: Field>(m: &Module<F>, q: &Quiver) -> String {
    let mut out = String::new();
    for (v, &d) in m.dims.iter().enumerate() {
        if d > 0 {
            let _ = writeln!(out, "mdim {} = {d}", q.vertex_id(v));
        }
    }
    for (x, a) in q.arrows().iter().enumerate() {
        if !m.actions[x].is_zero() {
            let _ = writeln!(out, "maction {} = {}", a.id, m.actions[x]);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dsl::parse_presentation;
    use crate::field::Rational;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    type Q = Rational;

    fn a3() -> PathCategory<Q> {
        PathCategory::new(parse_presentation("vertex 1 2 3\narrow x : 1 -> 2\narrow y : 2 -> 3\n").unwrap())
    }

    #[test]
    fn projectives_and_yoneda() {
        let c = a3();
        let q = c.quiver();
        let p1 = Module::projective(&c, 0).unwrap();
        assert_eq!(p1.dims(), &[1, 1, 1]);
        let s2 = Module::<Q>::simple(q, 1);
        assert_eq!(hom_dim(q, &p1, &s2), 0);
        let p2 = Module::projective(&c, 1).unwrap();
        assert_eq!(hom_dim(q, &p2, &s2), 1);
        assert_eq!(hom_dim(q, &p2, &p1), 1);
        assert_eq!(hom_dim(q, &p1, &p2), 0);
        assert!(hom_modules(q, &p1, &p1).iter().any(|f| f.is_iso()));
    }

    #[test]
    fn oversized_module_files_are_rejected() {
        let c = a3();
        let q = c.quiver();
        assert!(parse_module::<Q>("mdim 1 = 99999999999", q).is_err());
        assert!(parse_module::<Q>("mdim 1 = 256\nmdim 2 = 256\nmdim 3 = 256", q).is_ok());
        assert!(parse_module::<Q>("mdim 1 = 257", q).is_err());
    }

    #[test]
    fn kernel_and_cokernel() {
        let c = a3();
        let q = c.quiver();
        let p1 = Module::projective(&c, 0).unwrap();
        let id = p1.identity();
        assert!(id.kernel(q, &p1).0.is_zero());
        let zero = Module::zero(q).zero_map_to(&p1);
        assert_eq!(zero.cokernel(q, &p1).0, p1);
        let (rad, _) = p1.radical(q);
        assert_eq!(rad.dims(), &[0, 1, 1]);
        assert_eq!(p1.top_dims(q), vec![1, 0, 0]);
    }

    #[test]
    fn resolutions_and_ext() {
        let c = a3();
        let q = c.quiver();
        let s1 = Module::<Q>::simple(q, 0);
        let s2 = Module::<Q>::simple(q, 1);
        assert_eq!(projective_dimension(&c, &s1, 5).unwrap(), ProjDim::Exact(1));
        assert_eq!(ext(&c, &s1, &s2, 1).unwrap().dim, 1);
        assert_eq!(ext(&c, &s2, &s1, 1).unwrap().dim, 0);
        assert_eq!(ext(&c, &s1, &s1, 0).unwrap().dim, 1);
        let p = Module::projective(&c, 0).unwrap();
        assert_eq!(ext(&c, &p, &s2, 1).unwrap().dim, 0);
    }

    #[test]
    fn decomposition() {
        let c = a3();
        let q = c.quiver();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let p1 = Module::projective(&c, 0).unwrap();
        let sum = direct_sum(q, &[p1.clone(), p1.clone()]);
        let d = decompose_against(q, &sum, std::slice::from_ref(&p1), &mut rng, 8);
        assert_eq!(d.multiplicities(), Some(&[2][..]));
        let s1 = Module::<Q>::simple(q, 0);
        let s2 = Module::<Q>::simple(q, 1);
        let s3 = Module::<Q>::simple(q, 2);
        let d = decompose_against(q, &p1, &[s1, s2, s3], &mut rng, 8);
        assert!(matches!(d, Decomposition::Impossible));
    }

    #[test]
    fn module_file() {
        let c = a3();
        let q = c.quiver();
        let m: Module<Q> = parse_module("mdim 1 = 1\nmdim 2 = 1\nmaction x = [[1]]\n", q).unwrap();
        assert_eq!(m.dims(), &[1, 1, 0]);
        let again: Module<Q> = parse_module(&format_module(&m, q), q).unwrap();
        assert_eq!(again, m);
        assert!(parse_module::<Q>("mdim 1 = 1\nmaction x = [[1]]\n", q).is_err());
    }
}
