//! The category `KQ/I`: hom spaces, composition, reduction and radicals.
//!
//! Hom spaces out of a vertex `a` are read off the projective `P_a = (KQ/I)(a, -)`,
//! built one path length at a time. Homogeneous relations cut each graded
//! piece down as it is built; the remaining relations are applied at the
//! end by passing to a quotient module.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::sync::{Arc, RwLock};

use thiserror::Error;

use crate::field::Field;
use crate::matrix::{quotient_reps, Matrix, Span};
use crate::quiver::{Path, Presentation, Quiver, QuiverError, Relation};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PathCatError {
    #[error("paths out of `{vertex}` do not vanish by length {bound}; no truncation certificate")]
    NoTruncation { vertex: String, bound: usize },
    #[error("morphisms do not compose: target `{0}` differs from source `{1}`")]
    NotComposable(String, String),
    #[error("endomorphism ring of `{0}` is not local")]
    NotLocal(String),
    #[error("path does not run from `{0}` to `{1}`")]
    WrongEndpoints(String, String),
    #[error(transparent)]
    Quiver(#[from] QuiverError),
}

/// `P_a`: the representation `v -> (KQ/I)(a, v)` with a path basis at each
/// vertex.
#[derive(Debug, Clone)]
pub struct Projective<F> {
    pub vertex: usize,
    /// Representative paths `a -> v`, in increasing path order.
    pub basis: Vec<Vec<Path>>,
    /// One matrix per arrow `x: u -> v`, of shape `dim(v) x dim(u)`.
    pub actions: Vec<Matrix<F>>,
    /// Longest nonzero path length, per target vertex (`None` if the hom
    /// space is zero).
    pub top_length: Vec<Option<usize>>,
    /// Ambient raw path counts up to the global vanishing length.
    pub raw_counts: Vec<u128>,
    /// Least length at which all paths out of the vertex vanish.
    pub vanishing_length: usize,
}

impl<F: Field> Projective<F> {
    pub fn dim(&self, v: usize) -> usize {
        self.basis[v].len()
    }

    pub fn dims(&self) -> Vec<usize> {
        self.basis.iter().map(Vec::len).collect()
    }

    pub fn act_path(&self, path: &Path, v: &[F]) -> Vec<F> {
        path.arrows.iter().fold(v.to_vec(), |w, &a| self.actions[a].mul_vec(&w))
    }

    /// Coordinates of the trivial path.
    pub fn unit(&self) -> Vec<F> {
        let mut e = vec![F::zero(); self.dim(self.vertex)];
        if let Some(k) = self.basis[self.vertex].iter().position(Path::is_trivial) {
            e[k] = F::one();
        }
        e
    }

    pub fn path_coords(&self, path: &Path) -> Vec<F> {
        self.act_path(path, &self.unit())
    }
}

/// Basis of `(KQ/I)(a, b)` by representative paths.
#[derive(Debug, Clone)]
pub struct HomSpace {
    pub source: usize,
    pub target: usize,
    pub basis: Vec<Path>,
    /// Raw paths `a -> b` shorter than the vanishing length.
    pub ambient_paths: u128,
    pub vanishing_length: usize,
}

impl HomSpace {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn ideal_dim(&self) -> u128 {
        self.ambient_paths - self.basis.len() as u128
    }
}

/// An element of a hom space in quotient coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct Morphism<F> {
    pub source: usize,
    pub target: usize,
    pub coords: Vec<F>,
}

impl<F: Field> Morphism<F> {
    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(F::is_zero)
    }

    pub fn add(&self, other: &Morphism<F>) -> Morphism<F> {
        assert_eq!((self.source, self.target), (other.source, other.target), "adding non-parallel morphisms");
        let coords = self.coords.iter().zip(&other.coords).map(|(x, y)| x.add(y)).collect();
        Morphism { source: self.source, target: self.target, coords }
    }

    pub fn scale(&self, c: &F) -> Morphism<F> {
        Morphism { source: self.source, target: self.target, coords: self.coords.iter().map(|x| x.mul(c)).collect() }
    }
}

/// Per-pair vanishing certificate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairCertificate {
    pub source: usize,
    pub target: usize,
    /// Least `N` with every path `a -> b` of length `>= N` zero in `KQ/I`.
    pub vanishing_length: Result<usize, usize>,
}

#[derive(Debug, Clone)]
pub struct ValidationReport {
    pub locally_finite: bool,
    pub acyclic: bool,
    pub interval_finite: bool,
    pub search_bound: usize,
    pub certificates: Vec<PairCertificate>,
    pub boundary: Vec<String>,
}

impl ValidationReport {
    pub fn certified(&self) -> bool {
        self.certificates.iter().all(|c| c.vanishing_length.is_ok())
    }
}

/// `KQ/I` with memoized projectives.
pub struct PathCategory<F> {
    pres: Presentation<F>,
    bound: usize,
    homogeneous: Vec<usize>,
    mixed: Vec<usize>,
    cache: RwLock<HashMap<usize, Arc<Projective<F>>>>,
}

impl<F: Field> PathCategory<F> {
    pub fn new(pres: Presentation<F>) -> Self {
        let bound = 4 * pres.quiver.num_vertices() + 8;
        Self::with_bound(pres, bound)
    }

    /// `bound` is the path length at which an unfinished construction is
    /// reported as lacking a truncation certificate.
    pub fn with_bound(pres: Presentation<F>, bound: usize) -> Self {
        let (homogeneous, mixed) = (0..pres.relations.len()).partition(|&k| pres.relations[k].is_homogeneous());
        PathCategory { pres, bound, homogeneous, mixed, cache: RwLock::new(HashMap::new()) }
    }

    pub fn presentation(&self) -> &Presentation<F> {
        &self.pres
    }

    pub fn quiver(&self) -> &Quiver {
        &self.pres.quiver
    }

    pub fn bound(&self) -> usize {
        self.bound
    }

    pub fn projective(&self, a: usize) -> Result<Arc<Projective<F>>, PathCatError> {
        if let Some(p) = self.cache.read().expect("cache lock").get(&a) {
            return Ok(Arc::clone(p));
        }
        let p = Arc::new(self.build_projective(a)?);
        let mut cache = self.cache.write().expect("cache lock");
        Ok(Arc::clone(cache.entry(a).or_insert(p)))
    }

    pub fn hom(&self, a: usize, b: usize) -> Result<HomSpace, PathCatError> {
        let p = self.projective(a)?;
        Ok(HomSpace {
            source: a,
            target: b,
            basis: p.basis[b].clone(),
            ambient_paths: p.raw_counts[b],
            vanishing_length: p.vanishing_length,
        })
    }

    pub fn hom_dim(&self, a: usize, b: usize) -> Result<usize, PathCatError> {
        Ok(self.projective(a)?.dim(b))
    }

    /// `dim Hom(X, Y)` for direct sums given as vertex lists.
    pub fn hom_dim_sum(&self, xs: &[usize], ys: &[usize]) -> Result<usize, PathCatError> {
        let mut total = 0;
        for &x in xs {
            for &y in ys {
                total += self.hom_dim(x, y)?;
            }
        }
        Ok(total)
    }

    pub fn identity(&self, a: usize) -> Result<Morphism<F>, PathCatError> {
        let p = self.projective(a)?;
        Ok(Morphism { source: a, target: a, coords: p.unit() })
    }

    /// Coordinates of a linear combination of parallel raw paths `a -> b`.
    pub fn reduce(&self, a: usize, b: usize, combo: &[(F, Path)]) -> Result<Morphism<F>, PathCatError> {
        let p = self.projective(a)?;
        let mut coords = vec![F::zero(); p.dim(b)];
        for (c, path) in combo {
            if path.source != a || path.target != b {
                let q = self.quiver();
                return Err(PathCatError::WrongEndpoints(q.vertex_id(a).into(), q.vertex_id(b).into()));
            }
            for (x, y) in coords.iter_mut().zip(p.path_coords(path)) {
                x.add_mul(c, &y);
            }
        }
        Ok(Morphism { source: a, target: b, coords })
    }

    pub fn path_morphism(&self, path: &Path) -> Result<Morphism<F>, PathCatError> {
        self.reduce(path.source, path.target, &[(F::one(), path.clone())])
    }

    pub fn ideal_membership(&self, a: usize, b: usize, combo: &[(F, Path)]) -> Result<bool, PathCatError> {
        Ok(self.reduce(a, b, combo)?.is_zero())
    }

    pub fn relation_in_ideal(&self, r: &Relation<F>) -> Result<bool, PathCatError> {
        self.ideal_membership(r.source(), r.target(), r.terms())
    }

    /// `g ∘ f`.
    pub fn compose(&self, g: &Morphism<F>, f: &Morphism<F>) -> Result<Morphism<F>, PathCatError> {
        if f.target != g.source {
            let q = self.quiver();
            return Err(PathCatError::NotComposable(q.vertex_id(f.target).into(), q.vertex_id(g.source).into()));
        }
        let pa = self.projective(f.source)?;
        let pb = self.projective(g.source)?;
        let mut coords = vec![F::zero(); pa.dim(g.target)];
        for (c, rep) in g.coords.iter().zip(&pb.basis[g.target]) {
            if c.is_zero() {
                continue;
            }
            let moved = pa.act_path(rep, &f.coords);
            for (x, y) in coords.iter_mut().zip(moved) {
                x.add_mul(c, &y);
            }
        }
        Ok(Morphism { source: f.source, target: g.target, coords })
    }

    /// Matrix of `f -> g ∘ f` from `Hom(a, b)` to `Hom(a, c)` for fixed `g: b -> c`.
    pub fn post_composition(&self, a: usize, g: &Morphism<F>) -> Result<Matrix<F>, PathCatError> {
        let pa = self.projective(a)?;
        let pb = self.projective(g.source)?;
        let mut m = Matrix::zeros(pa.dim(g.target), pa.dim(g.source));
        for (c, rep) in g.coords.iter().zip(&pb.basis[g.target]) {
            if c.is_zero() {
                continue;
            }
            let mut act = Matrix::identity(pa.dim(g.source));
            for &x in &rep.arrows {
                act = pa.actions[x].mul(&act);
            }
            m = m.add(&act.scale(c));
        }
        Ok(m)
    }

    /// Columns spanning `rad(a, b)` in hom coordinates.
    pub fn radical(&self, a: usize, b: usize) -> Result<Matrix<F>, PathCatError> {
        let p = self.projective(a)?;
        let n = p.dim(b);
        if a != b {
            return Ok(Matrix::identity(n));
        }
        let Some(k) = p.basis[a].iter().position(Path::is_trivial) else {
            return Err(PathCatError::NotLocal(self.quiver().vertex_id(a).into()));
        };
        let cols: Vec<usize> = (0..n).filter(|&i| i != k).collect();
        Ok(Matrix::identity(n).select_cols(&cols))
    }

    pub fn radical_dim(&self, a: usize, b: usize) -> Result<usize, PathCatError> {
        Ok(self.radical(a, b)?.cols())
    }

    /// Least `N` such that every path `a -> b` of length at least `N` is zero.
    pub fn truncation_certificate(&self, a: usize, b: usize) -> Result<usize, PathCatError> {
        Ok(self.projective(a)?.top_length[b].map_or(0, |l| l + 1))
    }

    fn build_projective(&self, a: usize) -> Result<Projective<F>, PathCatError> {
        let q = &self.pres.quiver;
        let nv = q.num_vertices();
        let graded = self.graded_pieces(a)?;
        let vanishing_length = graded.len();

        // Flatten the graded pieces.
        let mut offset = vec![vec![0usize; graded.len()]; nv];
        let mut basis: Vec<Vec<Path>> = vec![Vec::new(); nv];
        let mut top_length = vec![None; nv];
        for v in 0..nv {
            for (d, piece) in graded.iter().enumerate() {
                offset[v][d] = basis[v].len();
                if !piece.reps[v].is_empty() {
                    top_length[v] = Some(d);
                }
                basis[v].extend(piece.reps[v].iter().cloned());
            }
        }
        let mut actions = Vec::with_capacity(q.num_arrows());
        for (x, arrow) in q.arrows().iter().enumerate() {
            let (u, v) = (arrow.source, arrow.target);
            let mut m = Matrix::zeros(basis[v].len(), basis[u].len());
            for d in 1..graded.len() {
                m.set_block(offset[v][d], offset[u][d - 1], &graded[d].acts[x]);
            }
            actions.push(m);
        }
        let raw_counts = raw_path_counts(q, a, vanishing_length);
        let mut proj = Projective { vertex: a, basis, actions, top_length, raw_counts, vanishing_length };
        if !self.mixed.is_empty() {
            proj = self.apply_mixed(proj);
        }
        Ok(proj)
    }

    fn graded_pieces(&self, a: usize) -> Result<Vec<Piece<F>>, PathCatError> {
        let q = &self.pres.quiver;
        let nv = q.num_vertices();
        let mut first = Piece { reps: vec![Vec::new(); nv], acts: Vec::new() };
        first.reps[a].push(Path::trivial(a));
        let mut pieces = vec![first];
        loop {
            let d = pieces.len();
            if d > self.bound {
                return Err(PathCatError::NoTruncation { vertex: q.vertex_id(a).to_string(), bound: self.bound });
            }
            let prev = &pieces[d - 1];
            let mut reps = vec![Vec::new(); nv];
            let mut acts: Vec<Matrix<F>> = (0..q.num_arrows())
                .map(|x| Matrix::zeros(0, prev.reps[q.arrow(x).source].len()))
                .collect();
            for v in 0..nv {
                let into: Vec<usize> = q.arrows_into(v).collect();
                let mut block_start = HashMap::new();
                let mut candidates = Vec::new();
                for &x in &into {
                    block_start.insert(x, candidates.len());
                    let xp = Path::arrow(q, x);
                    candidates.extend(prev.reps[q.arrow(x).source].iter().map(|r| r.then(&xp)));
                }
                if candidates.is_empty() {
                    continue;
                }
                let mut sub = Span::new(candidates.len());
                for &k in &self.homogeneous {
                    let rel = &self.pres.relations[k];
                    let len = rel.max_len();
                    if rel.target() != v || len > d {
                        continue;
                    }
                    let low = &pieces[d - len];
                    for j in 0..low.reps[rel.source()].len() {
                        let mut vec = vec![F::zero(); candidates.len()];
                        for (c, path) in rel.terms() {
                            let mut w = vec![F::zero(); low.reps[rel.source()].len()];
                            w[j] = F::one();
                            for (step, &y) in path.arrows[..len - 1].iter().enumerate() {
                                w = pieces[d - len + step + 1].acts[y].mul_vec(&w);
                            }
                            let last = *path.arrows.last().expect("positive length");
                            let start = block_start[&last];
                            for (i, val) in w.iter().enumerate() {
                                vec[start + i].add_mul(c, val);
                            }
                        }
                        sub.insert(&vec);
                    }
                }
                let (keep, project) = quotient_least(q, &candidates, &sub.basis());
                reps[v] = keep.iter().map(|&k| candidates[k].clone()).collect();
                for &x in &into {
                    let start = block_start[&x];
                    let width = prev.reps[q.arrow(x).source].len();
                    acts[x] = project.select_cols(&(start..start + width).collect::<Vec<_>>());
                }
            }
            for (x, m) in acts.iter_mut().enumerate() {
                if m.rows() != reps[q.arrow(x).target].len() {
                    *m = Matrix::zeros(reps[q.arrow(x).target].len(), m.cols());
                }
            }
            if reps.iter().all(Vec::is_empty) {
                return Ok(pieces);
            }
            pieces.push(Piece { reps, acts });
        }
    }

    /// Quotients `proj` by the submodule generated by the non-homogeneous
    /// relations.
    fn apply_mixed(&self, proj: Projective<F>) -> Projective<F> {
        let q = &self.pres.quiver;
        let nv = q.num_vertices();
        let mut spans: Vec<Span<F>> = (0..nv).map(|v| Span::new(proj.dim(v))).collect();
        let mut work: Vec<(usize, Vec<F>)> = Vec::new();
        for &k in &self.mixed {
            let rel = &self.pres.relations[k];
            let (s, t) = (rel.source(), rel.target());
            for j in 0..proj.dim(s) {
                let mut e = vec![F::zero(); proj.dim(s)];
                e[j] = F::one();
                let mut w = vec![F::zero(); proj.dim(t)];
                for (c, path) in rel.terms() {
                    for (x, y) in w.iter_mut().zip(proj.act_path(path, &e)) {
                        x.add_mul(c, &y);
                    }
                }
                if spans[t].insert(&w) {
                    work.push((t, w));
                }
            }
        }
        while let Some((v, w)) = work.pop() {
            for x in q.arrows_from(v) {
                let t = q.arrow(x).target;
                let image = proj.actions[x].mul_vec(&w);
                if spans[t].insert(&image) {
                    work.push((t, image));
                }
            }
        }
        let mut basis = Vec::with_capacity(nv);
        let mut projects = Vec::with_capacity(nv);
        let mut keeps = Vec::with_capacity(nv);
        for v in 0..nv {
            let (keep, project) = quotient_least(q, &proj.basis[v], &spans[v].basis());
            basis.push(keep.iter().map(|&k| proj.basis[v][k].clone()).collect::<Vec<_>>());
            projects.push(project);
            keeps.push(keep);
        }
        let actions = q
            .arrows()
            .iter()
            .enumerate()
            .map(|(x, arrow)| projects[arrow.target].mul(&proj.actions[x].select_cols(&keeps[arrow.source])))
            .collect();
        let top_length = basis.iter().map(|b: &Vec<Path>| b.iter().map(Path::len).max()).collect();
        Projective { vertex: proj.vertex, basis, actions, top_length, raw_counts: proj.raw_counts, vanishing_length: proj.vanishing_length }
    }
}

struct Piece<F> {
    reps: Vec<Vec<Path>>,
    /// Per arrow, the map from the previous piece at its source to this
    /// piece at its target.
    acts: Vec<Matrix<F>>,
}

/// Quotient of the space with basis `paths` by the span of the columns of
/// `sub`, with representatives chosen as the least paths. Returns the kept
/// indices in increasing path order and the projection onto them.
fn quotient_least<F: Field>(q: &Quiver, paths: &[Path], sub: &Matrix<F>) -> (Vec<usize>, Matrix<F>) {
    let n = paths.len();
    let mut order: Vec<usize> = (0..n).collect();
    // Largest path first, so that elimination pivots land on large paths.
    order.sort_by(|&i, &j| q.compare_paths(&paths[j], &paths[i]).then(Ordering::Equal));
    let permuted = sub.select_rows(&order);
    let quot = quotient_reps(n, &permuted);
    let mut keep: Vec<(usize, usize)> = quot.reps.iter().enumerate().map(|(k, &r)| (order[r], k)).collect();
    keep.sort_by(|a, b| q.compare_paths(&paths[a.0], &paths[b.0]));
    let mut project = Matrix::zeros(keep.len(), n);
    for (row, &(_, k)) in keep.iter().enumerate() {
        for (c, &orig) in order.iter().enumerate() {
            let v = quot.project.get(k, c);
            if !v.is_zero() {
                project.set(row, orig, v.clone());
            }
        }
    }
    (keep.into_iter().map(|(i, _)| i).collect(), project)
}

/// Number of raw paths `a -> v` of length below `limit`, per `v`.
pub fn raw_path_counts(q: &Quiver, a: usize, limit: usize) -> Vec<u128> {
    let nv = q.num_vertices();
    let mut layer = vec![0u128; nv];
    layer[a] = 1;
    let mut total = vec![0u128; nv];
    for _ in 0..limit {
        for (t, l) in total.iter_mut().zip(&layer) {
            *t = t.saturating_add(*l);
        }
        let mut next = vec![0u128; nv];
        for arrow in q.arrows() {
            next[arrow.target] = next[arrow.target].saturating_add(layer[arrow.source]);
        }
        layer = next;
    }
    total
}

/// Local finiteness, acyclicity and per-pair truncation certificates.
pub fn validate_presentation<F: Field>(cat: &PathCategory<F>) -> ValidationReport {
    let q = cat.quiver();
    let nv = q.num_vertices();
    let mut certificates = Vec::new();
    for a in 0..nv {
        let proj = cat.projective(a);
        for b in 0..nv {
            let vanishing_length = match &proj {
                Ok(p) => Ok(p.top_length[b].map_or(0, |l| l + 1)),
                Err(_) => Err(cat.bound()),
            };
            certificates.push(PairCertificate { source: a, target: b, vanishing_length });
        }
    }
    let acyclic = q.is_acyclic();
    let interval_finite = acyclic || certificates.iter().all(|c| c.vanishing_length.is_ok());
    ValidationReport {
        locally_finite: true,
        acyclic,
        interval_finite,
        search_bound: cat.bound(),
        certificates,
        boundary: cat.presentation().boundary.clone(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dsl::parse_presentation;
    use crate::family::{materialize_window, FamilyKind, FamilySpec};
    use crate::field::Rational;

    fn zigzag(n: i64) -> PathCategory<Rational> {
        PathCategory::new(materialize_window(&FamilySpec::new(FamilyKind::ZigzagAInf, vec![(1, n)])).unwrap())
    }

    #[test]
    fn zigzag_endomorphisms() {
        let c = zigzag(4);
        assert_eq!(c.hom_dim(0, 0).unwrap(), 1);
        assert_eq!(c.hom_dim(1, 1).unwrap(), 2);
        assert_eq!(c.hom_dim(2, 2).unwrap(), 2);
        assert_eq!(c.radical_dim(0, 0).unwrap(), 0);
        assert_eq!(c.radical_dim(1, 1).unwrap(), 1);
        let p = c.projective(1).unwrap();
        assert_eq!(p.dims(), vec![1, 2, 1, 0]);
    }

    #[test]
    fn loop_at_one_squares_to_zero() {
        let c = zigzag(3);
        let pres = c.presentation();
        let loop1 = pres.path_from_word("b1.a1").unwrap();
        let f = c.path_morphism(&loop1).unwrap();
        assert!(f.is_zero());
        let mixed = pres.relation_from_words(&[(1, "a1.b1"), (-1, "b2.a2")]).unwrap();
        assert!(c.relation_in_ideal(&mixed).unwrap());
        assert!(!c.ideal_membership(0, 0, &[(Rational::one(), Path::trivial(0))]).unwrap());
    }

    #[test]
    fn identity_and_composition() {
        let c = zigzag(4);
        let pres = c.presentation();
        let l = c.path_morphism(&pres.path_from_word("a1.b1").unwrap()).unwrap();
        let id = c.identity(1).unwrap();
        assert_eq!(c.compose(&id, &l).unwrap(), l);
        assert_eq!(c.compose(&l, &id).unwrap(), l);
        assert!(c.compose(&l, &l).unwrap().is_zero());
    }

    #[test]
    fn loop_without_relations_has_no_certificate() {
        let p: Presentation<Rational> = parse_presentation("vertex 1\narrow x : 1 -> 1\n").unwrap();
        let c = PathCategory::with_bound(p, 10);
        assert!(matches!(c.hom(0, 0), Err(PathCatError::NoTruncation { .. })));
        let report = validate_presentation(&c);
        assert!(!report.acyclic);
        assert!(!report.certified());
    }

    #[test]
    fn mixed_relation_quotient() {
        // x: 1 -> 2, y: 2 -> 3, z: 1 -> 3 with y.x = z.
        let mut p: Presentation<Rational> =
            parse_presentation("vertex 1 2 3\narrow x : 1 -> 2\narrow y : 2 -> 3\narrow z : 1 -> 3\n").unwrap();
        let r = p.relation_from_words(&[(1, "y.x"), (-1, "z")]).unwrap();
        p.add_relation(r);
        let c = PathCategory::new(p);
        let h = c.hom(0, 2).unwrap();
        assert_eq!(h.dim(), 1);
        assert_eq!(h.basis[0].len(), 1);
        assert_eq!(h.ambient_paths, 2);
    }

    #[test]
    fn certificates_for_zigzag() {
        let c = zigzag(4);
        let report = validate_presentation(&c);
        assert!(!report.acyclic);
        assert!(report.certified());
        assert!(report.certificates.iter().all(|cert| cert.vanishing_length.unwrap() <= 3));
    }
}
