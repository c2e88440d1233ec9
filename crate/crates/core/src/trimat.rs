//! The triangular matrix category `[T 0; M U]`, its presentation by the
//! augmented quiver, and the computational checks comparing the two.

use std::collections::HashMap;

use rand::Rng;
use thiserror::Error;

use crate::bimodule::{Bimodule, BimoduleError};
use crate::dsl::{parse_relation, DslError};
use crate::field::Field;
use crate::matrix::Matrix;
use crate::pathcat::{PathCatError, PathCategory};
use crate::quiver::{product_presentation, Path, Presentation, Quiver, QuiverError, Relation};
use crate::report::{truncate_witnesses, Check, Status};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TriMatError {
    #[error("morphisms do not compose: {0}")]
    NotComposable(String),
    #[error("bimodule fails validation: {}", .0.join("; "))]
    InvalidBimodule(Vec<String>),
    #[error("vertex `{0}` occurs in both presentations")]
    VertexClash(String),
    #[error(transparent)]
    PathCat(#[from] PathCatError),
    #[error(transparent)]
    Bimodule(#[from] BimoduleError),
    #[error(transparent)]
    Quiver(#[from] QuiverError),
    #[error(transparent)]
    Dsl(#[from] DslError),
}

/// An object `[t 0; M u]`; either part may be absent.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TriObject {
    pub t: Option<usize>,
    pub u: Option<usize>,
}

impl TriObject {
    pub fn t(v: usize) -> Self {
        TriObject { t: Some(v), u: None }
    }

    pub fn u(v: usize) -> Self {
        TriObject { t: None, u: Some(v) }
    }
}

/// Block dimensions of a hom space.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TriHom {
    pub t_dim: usize,
    pub m_dim: usize,
    pub u_dim: usize,
}

impl TriHom {
    pub fn dim(&self) -> usize {
        self.t_dim + self.m_dim + self.u_dim
    }
}

/// `(f, m, g)` with `f` in `T`, `m ∈ M(target.u, source.t)`, `g` in `U`.
#[derive(Debug, Clone, PartialEq)]
pub struct TriMorphism<F> {
    pub source: TriObject,
    pub target: TriObject,
    pub f: Vec<F>,
    pub m: Vec<F>,
    pub g: Vec<F>,
}

impl<F: Field> TriMorphism<F> {
    pub fn coords(&self) -> Vec<F> {
        self.f.iter().chain(&self.m).chain(&self.g).cloned().collect()
    }

    pub fn is_zero(&self) -> bool {
        self.coords().iter().all(Field::is_zero)
    }
}

pub struct TriMat<'a, F> {
    pub t: &'a PathCategory<F>,
    pub u: &'a PathCategory<F>,
    pub m: &'a Bimodule<F>,
}

impl<'a, F: Field> TriMat<'a, F> {
    pub fn new(t: &'a PathCategory<F>, u: &'a PathCategory<F>, m: &'a Bimodule<F>) -> Self {
        TriMat { t, u, m }
    }

    pub fn hom(&self, x: TriObject, y: TriObject) -> Result<TriHom, TriMatError> {
        let t_dim = match (x.t, y.t) {
            (Some(a), Some(b)) => self.t.hom_dim(a, b)?,
            _ => 0,
        };
        let m_dim = match (y.u, x.t) {
            (Some(i), Some(j)) => self.m.dim(i, j),
            _ => 0,
        };
        let u_dim = match (x.u, y.u) {
            (Some(a), Some(b)) => self.u.hom_dim(a, b)?,
            _ => 0,
        };
        Ok(TriHom { t_dim, m_dim, u_dim })
    }

    pub fn identity(&self, x: TriObject) -> Result<TriMorphism<F>, TriMatError> {
        let f = x.t.map(|a| self.t.identity(a)).transpose()?.map_or_else(Vec::new, |m| m.coords);
        let g = x.u.map(|a| self.u.identity(a)).transpose()?.map_or_else(Vec::new, |m| m.coords);
        let m = vec![F::zero(); self.hom(x, x)?.m_dim];
        Ok(TriMorphism { source: x, target: x, f, m, g })
    }

    pub fn from_coords(&self, x: TriObject, y: TriObject, coords: &[F]) -> Result<TriMorphism<F>, TriMatError> {
        let h = self.hom(x, y)?;
        assert_eq!(coords.len(), h.dim(), "coordinate count");
        Ok(TriMorphism {
            source: x,
            target: y,
            f: coords[..h.t_dim].to_vec(),
            m: coords[h.t_dim..h.t_dim + h.m_dim].to_vec(),
            g: coords[h.t_dim + h.m_dim..].to_vec(),
        })
    }

    pub fn random_morphism<R: Rng>(&self, x: TriObject, y: TriObject, rng: &mut R) -> Result<TriMorphism<F>, TriMatError> {
        let n = self.hom(x, y)?.dim();
        let coords: Vec<F> = (0..n).map(|_| F::from_i64(rng.gen_range(-3..=3))).collect();
        self.from_coords(x, y, &coords)
    }

    /// `b ∘ a = (f2∘f1, m2•f1 + g2•m1, g2∘g1)`.
    pub fn compose(&self, b: &TriMorphism<F>, a: &TriMorphism<F>) -> Result<TriMorphism<F>, TriMatError> {
        if a.target != b.source {
            return Err(TriMatError::NotComposable(format!("{:?} then {:?}", a.target, b.source)));
        }
        let (x, y, z) = (a.source, a.target, b.target);
        let h = self.hom(x, z)?;
        let f = match (x.t, y.t, z.t) {
            (Some(p), Some(q), Some(r)) => {
                let f1 = crate::pathcat::Morphism { source: p, target: q, coords: a.f.clone() };
                let f2 = crate::pathcat::Morphism { source: q, target: r, coords: b.f.clone() };
                self.t.compose(&f2, &f1)?.coords
            }
            _ => vec![F::zero(); h.t_dim],
        };
        let g = match (x.u, y.u, z.u) {
            (Some(p), Some(q), Some(r)) => {
                let g1 = crate::pathcat::Morphism { source: p, target: q, coords: a.g.clone() };
                let g2 = crate::pathcat::Morphism { source: q, target: r, coords: b.g.clone() };
                self.u.compose(&g2, &g1)?.coords
            }
            _ => vec![F::zero(); h.u_dim],
        };
        let mut m = vec![F::zero(); h.m_dim];
        if let (Some(zu), Some(xt)) = (z.u, x.t) {
            // m2 • f1: m2 ∈ M(z.u, y.t), f1: x.t -> y.t.
            if let Some(yt) = y.t {
                let reps = self.t.hom(xt, yt)?.basis;
                for (c, p) in a.f.iter().zip(&reps) {
                    if !c.is_zero() {
                        let v = self.m.right_path(zu, p).mul_vec(&b.m);
                        add_scaled(&mut m, c, &v);
                    }
                }
            }
            // g2 • m1: m1 ∈ M(y.u, x.t), g2: y.u -> z.u.
            if let Some(yu) = y.u {
                let reps = self.u.hom(yu, zu)?.basis;
                for (c, p) in b.g.iter().zip(&reps) {
                    if !c.is_zero() {
                        let v = self.m.left_path(p, xt).mul_vec(&a.m);
                        add_scaled(&mut m, c, &v);
                    }
                }
            }
        }
        Ok(TriMorphism { source: x, target: z, f, m, g })
    }
}

fn add_scaled<F: Field>(acc: &mut [F], c: &F, v: &[F]) {
    for (a, b) in acc.iter_mut().zip(v) {
        a.add_mul(c, b);
    }
}

/// `K(R, B, Q) / (J ∪ I ∪ μ)` with the dictionary back to the blocks.
#[derive(Debug, Clone)]
pub struct Augmented<F> {
    pub presentation: Presentation<F>,
    pub t_vertex: Vec<usize>,
    pub u_vertex: Vec<usize>,
    pub t_arrow: Vec<usize>,
    pub u_arrow: Vec<usize>,
    /// `basis_arrow[i][j][k]`: new arrow `j -> i` for the `k`-th basis
    /// element of `M(i, j)`.
    pub basis_arrow: Vec<Vec<Vec<usize>>>,
    pub mu: Vec<Relation<F>>,
}

impl<F: Field> Augmented<F> {
    pub fn vertex_of(&self, x: TriObject) -> Option<usize> {
        match (x.t, x.u) {
            (Some(t), None) => Some(self.t_vertex[t]),
            (None, Some(u)) => Some(self.u_vertex[u]),
            _ => None,
        }
    }

    /// Basis label paired with the id of its new arrow.
    pub fn dictionary(&self, m: &Bimodule<F>) -> Vec<(String, String)> {
        let q = &self.presentation.quiver;
        m.basis_elements()
            .into_iter()
            .map(|(i, j, k)| (m.labels(i, j)[k].clone(), q.arrow(self.basis_arrow[i][j][k]).id.clone()))
            .collect()
    }

    pub fn mu_display(&self) -> Vec<String> {
        self.mu.iter().map(|r| r.display(&self.presentation.quiver).to_string()).collect()
    }

    /// Every object of the window as an indecomposable `TriObject`,
    /// `T`-part first.
    pub fn objects(&self) -> Vec<TriObject> {
        (0..self.t_vertex.len()).map(TriObject::t).chain((0..self.u_vertex.len()).map(TriObject::u)).collect()
    }
}

/// Checks the bimodule first; see [`build_augmented_unchecked`].
pub fn build_augmented<F: Field>(tt: &Presentation<F>, tu: &Presentation<F>, m: &Bimodule<F>) -> Result<Augmented<F>, TriMatError> {
    let bad = m.validate(tu, tt);
    if !bad.is_empty() {
        return Err(TriMatError::InvalidBimodule(bad.into_iter().map(|v| v.witness).collect()));
    }
    build_augmented_unchecked(tt, tu, m)
}

/// Builds the augmented presentation from whatever data `m` holds.
pub fn build_augmented_unchecked<F: Field>(
    tt: &Presentation<F>,
    tu: &Presentation<F>,
    m: &Bimodule<F>,
) -> Result<Augmented<F>, TriMatError> {
    let (t, u) = (&tt.quiver, &tu.quiver);
    let mut q = Quiver::new(format!("{}_{}", t.name(), u.name()));
    let mut t_vertex = Vec::new();
    for v in t.vertex_ids() {
        t_vertex.push(q.add_vertex(v.clone())?);
    }
    let mut u_vertex = Vec::new();
    for v in u.vertex_ids() {
        if q.vertex(v).is_some() {
            return Err(TriMatError::VertexClash(v.clone()));
        }
        u_vertex.push(q.add_vertex(v.clone())?);
    }
    let mut t_arrow = Vec::new();
    for a in t.arrows() {
        t_arrow.push(q.add_arrow(a.id.clone(), t_vertex[a.source], t_vertex[a.target])?);
    }
    let mut u_arrow = Vec::new();
    for a in u.arrows() {
        let id = if q.arrow_by_id(&a.id).is_some() { format!("{}_u", a.id) } else { a.id.clone() };
        u_arrow.push(q.add_arrow(id, u_vertex[a.source], u_vertex[a.target])?);
    }
    let mut basis_arrow = vec![vec![Vec::new(); t.num_vertices()]; u.num_vertices()];
    for (i, j, k) in m.basis_elements() {
        let label = &m.labels(i, j)[k];
        let mut id = label.clone();
        while q.arrow_by_id(&id).is_some() {
            id.push_str("_m");
        }
        basis_arrow[i][j].push(q.add_arrow(id, t_vertex[j], u_vertex[i])?);
    }

    let mut pres = Presentation::new(q);
    pres.boundary = tt.boundary.iter().chain(&tu.boundary).cloned().collect();
    for r in &tt.relations {
        pres.add_relation(r.map_paths(|p| Path {
            source: t_vertex[p.source],
            target: t_vertex[p.target],
            arrows: p.arrows.iter().map(|&a| t_arrow[a]).collect(),
        }));
    }
    for r in &tu.relations {
        pres.add_relation(r.map_paths(|p| Path {
            source: u_vertex[p.source],
            target: u_vertex[p.target],
            arrows: p.arrows.iter().map(|&a| u_arrow[a]).collect(),
        }));
    }

    let arrow_path = |x: usize, pres: &Presentation<F>| Path::arrow(&pres.quiver, x);
    let mut mu = Vec::new();
    // [q] b⃗ - (q • b)⃗ for q: i -> i' in U.
    for (qi, qa) in u.arrows().iter().enumerate() {
        for j in 0..t.num_vertices() {
            for k in 0..m.dim(qa.source, j) {
                let first = arrow_path(basis_arrow[qa.source][j][k], &pres).then(&arrow_path(u_arrow[qi], &pres));
                let image = m.left_arrow(qi, j).col(k);
                mu.push(mu_generator(&pres, first, &image, &basis_arrow[qa.target][j])?);
            }
        }
    }
    // b⃗ [r] - (b • r)⃗ for r: j' -> j in T.
    for (ri, ra) in t.arrows().iter().enumerate() {
        for i in 0..u.num_vertices() {
            for k in 0..m.dim(i, ra.target) {
                let first = arrow_path(t_arrow[ri], &pres).then(&arrow_path(basis_arrow[i][ra.target][k], &pres));
                let image = m.right_arrow(ri, i).col(k);
                mu.push(mu_generator(&pres, first, &image, &basis_arrow[i][ra.source])?);
            }
        }
    }
    for r in &mu {
        pres.add_relation(r.clone());
    }
    Ok(Augmented { presentation: pres, t_vertex, u_vertex, t_arrow, u_arrow, basis_arrow, mu })
}

fn mu_generator<F: Field>(pres: &Presentation<F>, first: Path, image: &[F], arrows: &[usize]) -> Result<Relation<F>, TriMatError> {
    let mut terms = vec![(F::one(), first)];
    for (c, &x) in image.iter().zip(arrows) {
        if !c.is_zero() {
            terms.push((c.neg(), Path::arrow(&pres.quiver, x)));
        }
    }
    Ok(Relation::new(terms)?)
}

/// Whether `μ` and the given relation texts generate the same ideal
/// together with the remaining relations.
pub fn mu_equivalent<F: Field>(aug: &Augmented<F>, expected: &[&str]) -> Result<bool, TriMatError> {
    let pres = &aug.presentation;
    let expected: Vec<Relation<F>> = expected.iter().map(|e| parse_relation(pres, e)).collect::<Result<_, _>>()?;
    let with_mu = PathCategory::new(pres.clone());
    for r in &expected {
        if !with_mu.relation_in_ideal(r)? {
            return Ok(false);
        }
    }
    let mut alt = pres.clone();
    let base = pres.relations.len() - aug.mu.len();
    alt.relations.truncate(base);
    alt.relations.extend(expected);
    let with_expected = PathCategory::new(alt);
    for r in &aug.mu {
        if !with_expected.relation_in_ideal(r)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The functor `F: Λ -> K(R,B,Q)/(J ∪ I ∪ μ)` on the hom space `x -> y`,
/// as a matrix from block coordinates to hom coordinates.
pub fn functor_matrix<F: Field>(
    tri: &TriMat<'_, F>,
    aug: &Augmented<F>,
    cat: &PathCategory<F>,
    x: TriObject,
    y: TriObject,
) -> Result<Matrix<F>, TriMatError> {
    let (vx, vy) = (aug.vertex_of(x).expect("indecomposable"), aug.vertex_of(y).expect("indecomposable"));
    let target_dim = cat.hom_dim(vx, vy)?;
    let mut cols = Vec::new();
    if let (Some(a), Some(b)) = (x.t, y.t) {
        for p in tri.t.hom(a, b)?.basis {
            let mapped = Path {
                source: aug.t_vertex[p.source],
                target: aug.t_vertex[p.target],
                arrows: p.arrows.iter().map(|&r| aug.t_arrow[r]).collect(),
            };
            cols.push(cat.path_morphism(&mapped)?.coords);
        }
    }
    if let (Some(i), Some(j)) = (y.u, x.t) {
        for &arrow in &aug.basis_arrow[i][j] {
            cols.push(cat.path_morphism(&Path::arrow(&aug.presentation.quiver, arrow))?.coords);
        }
    }
    if let (Some(a), Some(b)) = (x.u, y.u) {
        for p in tri.u.hom(a, b)?.basis {
            let mapped = Path {
                source: aug.u_vertex[p.source],
                target: aug.u_vertex[p.target],
                arrows: p.arrows.iter().map(|&r| aug.u_arrow[r]).collect(),
            };
            cols.push(cat.path_morphism(&mapped)?.coords);
        }
    }
    Ok(Matrix::from_cols(&cols, target_dim))
}

/// Runs the isomorphism checks of `Λ` against its augmented presentation
/// on the given objects. `compare` is an optional second presentation
/// whose vertices are matched by id.
pub fn verify_iso_f<F: Field, R: Rng>(
    tri: &TriMat<'_, F>,
    aug: &Augmented<F>,
    window: &[TriObject],
    samples: usize,
    rng: &mut R,
    compare: Option<&Presentation<F>>,
) -> Vec<Check> {
    let cat = PathCategory::new(aug.presentation.clone());
    let name = |x: TriObject| aug.presentation.quiver.vertex_id(aug.vertex_of(x).expect("indecomposable")).to_string();
    let mut checks = Vec::new();

    let mut dim_bad = Vec::new();
    let mut bij_bad = Vec::new();
    let mut limited = Vec::new();
    let mut matrices = HashMap::new();
    for &x in window {
        for &y in window {
            let pair = format!("({},{})", name(x), name(y));
            let lambda = match tri.hom(x, y) {
                Ok(h) => h.dim(),
                Err(e) => {
                    limited.push(format!("{pair}: {e}"));
                    continue;
                }
            };
            let (vx, vy) = (aug.vertex_of(x).unwrap(), aug.vertex_of(y).unwrap());
            let presented = match cat.hom_dim(vx, vy) {
                Ok(d) => d,
                Err(e) => {
                    limited.push(format!("{pair}: {e}"));
                    continue;
                }
            };
            if lambda != presented {
                dim_bad.push(format!("{pair}: Λ has {lambda}, presentation has {presented}"));
            }
            match functor_matrix(tri, aug, &cat, x, y) {
                Ok(fm) => {
                    if fm.rank() != fm.rows() || fm.rank() != fm.cols() {
                        bij_bad.push(format!("{pair}: F has rank {} on a {}x{} block", fm.rank(), fm.rows(), fm.cols()));
                    }
                    matrices.insert((x, y), fm);
                }
                Err(e) => limited.push(format!("{pair}: {e}")),
            }
        }
    }
    checks.push(Check::with_status("iso-f/hom-dims", status_for(&dim_bad, &limited), truncate_witnesses(dim_bad.clone(), 8)));
    checks.push(Check::with_status("iso-f/bijective", status_for(&bij_bad, &limited), truncate_witnesses(bij_bad.clone(), 8)));

    let mut func_bad = Vec::new();
    let mut assoc_bad = Vec::new();
    if !window.is_empty() {
        for _ in 0..samples {
            let pick = |rng: &mut R| window[rng.gen_range(0..window.len())];
            let (x, y, z, w) = (pick(rng), pick(rng), pick(rng), pick(rng));
            let sample = (|| -> Result<(), TriMatError> {
                let a = tri.random_morphism(x, y, rng)?;
                let b = tri.random_morphism(y, z, rng)?;
                let c = tri.random_morphism(z, w, rng)?;
                let ba = tri.compose(&b, &a)?;
                let lhs = matrices[&(x, z)].mul_vec(&ba.coords());
                let fa = crate::pathcat::Morphism {
                    source: aug.vertex_of(x).unwrap(),
                    target: aug.vertex_of(y).unwrap(),
                    coords: matrices[&(x, y)].mul_vec(&a.coords()),
                };
                let fb = crate::pathcat::Morphism {
                    source: aug.vertex_of(y).unwrap(),
                    target: aug.vertex_of(z).unwrap(),
                    coords: matrices[&(y, z)].mul_vec(&b.coords()),
                };
                let rhs = cat.compose(&fb, &fa)?.coords;
                if lhs != rhs {
                    func_bad.push(format!("{} -> {} -> {}", name(x), name(y), name(z)));
                }
                let left = tri.compose(&c, &ba)?;
                let right = tri.compose(&tri.compose(&c, &b)?, &a)?;
                if left != right {
                    assoc_bad.push(format!("{} -> {} -> {} -> {}", name(x), name(y), name(z), name(w)));
                }
                Ok(())
            })();
            if let Err(e) = sample {
                limited.push(e.to_string());
            }
        }
    }
    checks.push(Check::with_status("iso-f/functorial", status_for(&func_bad, &limited), truncate_witnesses(func_bad.clone(), 8)));
    checks.push(Check::with_status("iso-f/associative", status_for(&assoc_bad, &limited), truncate_witnesses(assoc_bad.clone(), 8)));

    if let Some(other) = compare {
        let ocat = PathCategory::new(other.clone());
        let mut bad = Vec::new();
        let mut matched = 0;
        for &x in window {
            for &y in window {
                let (Some(ox), Some(oy)) = (other.quiver.vertex(&name(x)), other.quiver.vertex(&name(y))) else {
                    continue;
                };
                matched += 1;
                let lambda = tri.hom(x, y).map(|h| h.dim());
                let theirs = ocat.hom_dim(ox, oy);
                match (lambda, theirs) {
                    (Ok(a), Ok(b)) if a != b => bad.push(format!("({},{}): Λ has {a}, {} has {b}", name(x), name(y), other.name())),
                    (Ok(_), Ok(_)) => {}
                    (Err(e), _) => limited.push(e.to_string()),
                    (_, Err(e)) => limited.push(e.to_string()),
                }
            }
        }
        let c = Check::with_status("iso-f/compare", status_for(&bad, &limited), truncate_witnesses(bad, 8));
        checks.push(c.note(format!("{matched} matched pairs")));
    }
    if !limited.is_empty() {
        checks.push(Check::with_status("iso-f/window", Status::WindowLimited, truncate_witnesses(limited, 8)));
    }
    checks
}

/// Fail beats window-limited beats pass.
pub(crate) fn status_for(bad: &[String], limited: &[String]) -> Status {
    if !bad.is_empty() {
        Status::Fail
    } else if !limited.is_empty() {
        Status::WindowLimited
    } else {
        Status::Pass
    }
}

/// `dim Hom((p,r),(q,s)) = dim Hom(p,q) · dim Hom(r,s)` over every pair of
/// product vertices.
pub fn verify_tensor_iso<F: Field>(p1: &Presentation<F>, p2: &Presentation<F>) -> Check {
    let (prod, pq) = product_presentation(p1, p2);
    let (c1, c2, cp) = (PathCategory::new(p1.clone()), PathCategory::new(p2.clone()), PathCategory::new(prod));
    let n2 = p2.quiver.num_vertices();
    let mut bad = Vec::new();
    let mut limited = Vec::new();
    for (x, &(p, r)) in pq.pairs.iter().enumerate() {
        for (y, &(q, s)) in pq.pairs.iter().enumerate() {
            debug_assert_eq!(y, q * n2 + s);
            let factors = c1.hom_dim(p, q).and_then(|a| c2.hom_dim(r, s).map(|b| a * b));
            match (cp.hom_dim(x, y), factors) {
                (Ok(a), Ok(b)) if a != b => bad.push(format!(
                    "{} -> {}: product has {a}, factors give {b}",
                    pq.quiver.vertex_id(x),
                    pq.quiver.vertex_id(y)
                )),
                (Ok(_), Ok(_)) => {}
                (Err(e), _) | (_, Err(e)) => limited.push(e.to_string()),
            }
        }
    }
    let status = status_for(&bad, &limited);
    let mut w = truncate_witnesses(bad, 8);
    w.extend(truncate_witnesses(limited, 4));
    Check::with_status("tensor/hom-dims", status, w)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bimodule::parse_bimodule;
    use crate::dsl::parse_presentation;
    use crate::field::Rational;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    type Q = Rational;

    fn a2(name: &str, sfx: &str) -> Presentation<Q> {
        parse_presentation(&format!("quiver {name}\nvertex 1{sfx} 2{sfx}\narrow x{sfx} : 1{sfx} -> 2{sfx}")).unwrap()
    }

    #[test]
    fn zero_bimodule_gives_disjoint_union() {
        let (t, u) = (a2("T", ""), a2("U", "'"));
        let m = Bimodule::zero(&u.quiver, &t.quiver);
        let aug = build_augmented(&t, &u, &m).unwrap();
        assert!(aug.mu.is_empty());
        assert_eq!(aug.presentation.quiver.num_arrows(), 2);
        let (ct, cu) = (PathCategory::new(t.clone()), PathCategory::new(u.clone()));
        let tri = TriMat::new(&ct, &cu, &m);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let checks = verify_iso_f(&tri, &aug, &aug.objects(), 50, &mut rng, None);
        assert!(checks.iter().all(Check::passed), "{checks:?}");
    }

    #[test]
    fn small_bimodule_iso_and_triangularity() {
        // M(2',1) = K with x' acting from M(1',1) = K.
        let (t, u) = (a2("T", ""), a2("U", "'"));
        let text = "dim (1',1) = 1\nbasis (1',1) = m\ndim (2',1) = 1\nbasis (2',1) = n\nleft x' (1',1)->(2',1) = [[1]]\n\
                    dim (2',2) = 1\nbasis (2',2) = p\nright x (2',2)->(2',1) = [[1]]";
        let m: Bimodule<Q> = parse_bimodule(text, &u, &t).unwrap();
        assert!(m.validate(&u, &t).is_empty());
        let aug = build_augmented(&t, &u, &m).unwrap();
        assert_eq!(aug.mu_display(), vec!["x'.m - n".to_string(), "p.x - n".to_string()]);
        let (ct, cu) = (PathCategory::new(t.clone()), PathCategory::new(u.clone()));
        let tri = TriMat::new(&ct, &cu, &m);
        for x in aug.objects() {
            for y in aug.objects() {
                if x.u.is_some() && y.t.is_some() {
                    assert_eq!(tri.hom(x, y).unwrap().dim(), 0);
                }
            }
        }
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let checks = verify_iso_f(&tri, &aug, &aug.objects(), 200, &mut rng, None);
        assert!(checks.iter().all(Check::passed), "{checks:?}");
        assert!(mu_equivalent(&aug, &["x'.m - n", "p.x - x'.m"]).unwrap());
        assert!(!mu_equivalent(&aug, &["x'.m - n"]).unwrap());
    }

    #[test]
    fn dropping_a_generator_changes_dims() {
        let (t, u) = (a2("T", ""), a2("U", "'"));
        let text = "dim (1',1) = 1\ndim (2',1) = 1\nleft x' (1',1)->(2',1) = [[1]]";
        let m: Bimodule<Q> = parse_bimodule(text, &u, &t).unwrap();
        let mut aug = build_augmented(&t, &u, &m).unwrap();
        aug.presentation.relations.pop();
        aug.mu.pop();
        let (ct, cu) = (PathCategory::new(t.clone()), PathCategory::new(u.clone()));
        let tri = TriMat::new(&ct, &cu, &m);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let checks = verify_iso_f(&tri, &aug, &aug.objects(), 10, &mut rng, None);
        assert_eq!(checks[0].status, Status::Fail);
    }

    #[test]
    fn tensor_of_a2_with_itself() {
        let check = verify_tensor_iso(&a2("A", ""), &a2("B", "'"));
        assert!(check.passed(), "{check:?}");
    }

    #[test]
    fn identities_compose() {
        let (t, u) = (a2("T", ""), a2("U", "'"));
        let text = "dim (1',1) = 1\ndim (2',1) = 1\nleft x' (1',1)->(2',1) = [[1]]";
        let m: Bimodule<Q> = parse_bimodule(text, &u, &t).unwrap();
        let (ct, cu) = (PathCategory::new(t.clone()), PathCategory::new(u.clone()));
        let tri = TriMat::new(&ct, &cu, &m);
        let (x, y) = (TriObject::t(0), TriObject::u(1));
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let a = tri.random_morphism(x, y, &mut rng).unwrap();
        assert_eq!(tri.compose(&tri.identity(y).unwrap(), &a).unwrap(), a);
        assert_eq!(tri.compose(&a, &tri.identity(x).unwrap()).unwrap(), a);
    }
}
