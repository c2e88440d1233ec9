//! Finite bimodules `M: U ⊗ T^op -> mod K` between two bound quivers.
//!
//! `M(i, j)` sits over a `U`-vertex `i` and a `T`-vertex `j`. An arrow
//! `q: i -> i'` of `U` acts covariantly `M(i, j) -> M(i', j)`; an arrow
//! `r: j' -> j` of `T` acts contravariantly `M(i, j) -> M(i, j')`.

use std::collections::HashSet;
use std::fmt::Write as _;

use thiserror::Error;

use crate::dsl::is_arrow_id;
use crate::field::Field;
use crate::matrix::Matrix;
use crate::module::Module;
use crate::quiver::{Path, Presentation, Quiver};
use crate::text::{check_total_dim, content_lines, parse_dim, parse_matrix, shaped, split_assignment, TextError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BimoduleError {
    #[error(transparent)]
    Text(#[from] TextError),
    #[error("arrow `{arrow}` does not run {expected}")]
    Endpoints { arrow: String, expected: String },
    #[error("expected a {expected:?} matrix, got {got:?}")]
    Shape { expected: (usize, usize), got: (usize, usize) },
    #[error("basis label `{0}` is used twice")]
    DuplicateLabel(String),
    #[error("`{0}` is not a usable basis label")]
    BadLabel(String),
    #[error("paths do not meet the pair ({0}, {1})")]
    NotComposable(String, String),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Bimodule<F> {
    /// `dims[i][j] = dim M(i, j)`.
    dims: Vec<Vec<usize>>,
    labels: Vec<Vec<Vec<String>>>,
    /// `left[q][j]: M(s(q), j) -> M(t(q), j)`.
    left: Vec<Vec<Matrix<F>>>,
    /// `right[r][i]: M(i, t(r)) -> M(i, s(r))`.
    right: Vec<Vec<Matrix<F>>>,
}

/// One failed invariant.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub kind: ViolationKind,
    pub witness: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ViolationKind {
    LeftRelation,
    RightRelation,
    Commutation,
}

impl<F: Field> Bimodule<F> {
    /// All actions zero, labels `b1, b2, …` in `(i, j)` order.
    pub fn new(u: &Quiver, t: &Quiver, dims: Vec<Vec<usize>>) -> Self {
        assert_eq!(dims.len(), u.num_vertices(), "one row of dims per U-vertex");
        assert!(dims.iter().all(|r| r.len() == t.num_vertices()), "one column of dims per T-vertex");
        let mut counter = 0;
        let labels = dims
            .iter()
            .map(|row| {
                row.iter()
                    .map(|&d| {
                        (0..d)
                            .map(|_| {
                                counter += 1;
                                format!("b{counter}")
                            })
                            .collect()
                    })
                    .collect()
            })
            .collect();
        let left = u
            .arrows()
            .iter()
            .map(|q| (0..t.num_vertices()).map(|j| Matrix::zeros(dims[q.target][j], dims[q.source][j])).collect())
            .collect();
        let right = t
            .arrows()
            .iter()
            .map(|r| (0..u.num_vertices()).map(|i| Matrix::zeros(dims[i][r.source], dims[i][r.target])).collect())
            .collect();
        Bimodule { dims, labels, left, right }
    }

    /// `M(i, j) = P(i) ⊗ Q(j)` for a `U`-module `P` and a module `Q` over
    /// the opposite of `T` (indexed by the vertices and arrows of `T`).
    /// The result is a bimodule whenever `P` and `Q` satisfy their relations.
    pub fn tensor(u: &Quiver, t: &Quiver, p: &Module<F>, q: &Module<F>) -> Self {
        let dims = (0..u.num_vertices()).map(|i| (0..t.num_vertices()).map(|j| p.dim(i) * q.dim(j)).collect()).collect();
        let mut m = Self::new(u, t, dims);
        for a in 0..u.num_arrows() {
            for j in 0..t.num_vertices() {
                m.left[a][j] = p.action(a).kron(&Matrix::identity(q.dim(j)));
            }
        }
        for r in 0..t.num_arrows() {
            for i in 0..u.num_vertices() {
                m.right[r][i] = Matrix::identity(p.dim(i)).kron(q.action(r));
            }
        }
        m
    }

    pub fn zero(u: &Quiver, t: &Quiver) -> Self {
        Self::new(u, t, vec![vec![0; t.num_vertices()]; u.num_vertices()])
    }

    pub fn dim(&self, i: usize, j: usize) -> usize {
        self.dims[i][j]
    }

    pub fn dims(&self) -> &[Vec<usize>] {
        &self.dims
    }

    pub fn total_dim(&self) -> usize {
        self.dims.iter().flatten().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.total_dim() == 0
    }

    pub fn labels(&self, i: usize, j: usize) -> &[String] {
        &self.labels[i][j]
    }

    pub fn set_labels(&mut self, i: usize, j: usize, labels: Vec<String>) -> Result<(), BimoduleError> {
        if labels.len() != self.dims[i][j] {
            return Err(BimoduleError::Shape { expected: (self.dims[i][j], 1), got: (labels.len(), 1) });
        }
        if let Some(bad) = labels.iter().find(|l| !is_arrow_id(l)) {
            return Err(BimoduleError::BadLabel(bad.clone()));
        }
        self.labels[i][j] = labels;
        self.check_unique_labels()
    }

    fn check_unique_labels(&self) -> Result<(), BimoduleError> {
        let mut seen = HashSet::new();
        for l in self.labels.iter().flatten().flatten() {
            if !seen.insert(l.as_str()) {
                return Err(BimoduleError::DuplicateLabel(l.clone()));
            }
        }
        Ok(())
    }

    pub fn set_left(&mut self, q: usize, j: usize, m: Matrix<F>) -> Result<(), BimoduleError> {
        let slot = &mut self.left[q][j];
        if (m.rows(), m.cols()) != (slot.rows(), slot.cols()) {
            return Err(BimoduleError::Shape { expected: (slot.rows(), slot.cols()), got: (m.rows(), m.cols()) });
        }
        *slot = m;
        Ok(())
    }

    pub fn set_right(&mut self, r: usize, i: usize, m: Matrix<F>) -> Result<(), BimoduleError> {
        let slot = &mut self.right[r][i];
        if (m.rows(), m.cols()) != (slot.rows(), slot.cols()) {
            return Err(BimoduleError::Shape { expected: (slot.rows(), slot.cols()), got: (m.rows(), m.cols()) });
        }
        *slot = m;
        Ok(())
    }

    pub fn left_arrow(&self, q: usize, j: usize) -> &Matrix<F> {
        &self.left[q][j]
    }

    pub fn right_arrow(&self, r: usize, i: usize) -> &Matrix<F> {
        &self.right[r][i]
    }

    /// Matrix of `m ↦ p • m` on `M(s(p), j)`.
    pub fn left_path(&self, p: &Path, j: usize) -> Matrix<F> {
        let mut acc = Matrix::identity(self.dims[p.source][j]);
        for &q in &p.arrows {
            acc = self.left[q][j].mul(&acc);
        }
        acc
    }

    /// Matrix of `m ↦ m • p` from `M(i, t(p))` to `M(i, s(p))`.
    pub fn right_path(&self, i: usize, p: &Path) -> Matrix<F> {
        let mut acc = Matrix::identity(self.dims[i][p.source]);
        for &r in &p.arrows {
            acc = acc.mul(&self.right[r][i]);
        }
        acc
    }

    /// `left • elt • right` for `elt ∈ M(i, j)`; the right path is applied
    /// first. Returns the new pair and coordinates.
    pub fn act(
        &self,
        left: Option<&Path>,
        (i, j): (usize, usize),
        elt: &[F],
        right: Option<&Path>,
    ) -> Result<((usize, usize), Vec<F>), BimoduleError> {
        if elt.len() != self.dims[i][j] {
            return Err(BimoduleError::Shape { expected: (self.dims[i][j], 1), got: (elt.len(), 1) });
        }
        let mut v = elt.to_vec();
        let mut jj = j;
        if let Some(r) = right {
            if r.target != j {
                return Err(BimoduleError::NotComposable(i.to_string(), j.to_string()));
            }
            v = self.right_path(i, r).mul_vec(&v);
            jj = r.source;
        }
        let mut ii = i;
        if let Some(l) = left {
            if l.source != i {
                return Err(BimoduleError::NotComposable(i.to_string(), j.to_string()));
            }
            v = self.left_path(l, jj).mul_vec(&v);
            ii = l.target;
        }
        Ok(((ii, jj), v))
    }

    /// Relations of both sides and the commutation law, checked on
    /// generators.
    pub fn validate(&self, tu: &Presentation<F>, tt: &Presentation<F>) -> Vec<Violation> {
        let (u, t) = (&tu.quiver, &tt.quiver);
        let mut out = Vec::new();
        for rel in &tu.relations {
            for j in 0..t.num_vertices() {
                let mut acc = Matrix::zeros(self.dims[rel.target()][j], self.dims[rel.source()][j]);
                for (c, p) in rel.terms() {
                    acc = acc.add(&self.left_path(p, j).scale(c));
                }
                if !acc.is_zero() {
                    out.push(Violation {
                        kind: ViolationKind::LeftRelation,
                        witness: format!("`{}` on column {}", rel.display(u), t.vertex_id(j)),
                    });
                }
            }
        }
        for rel in &tt.relations {
            for i in 0..u.num_vertices() {
                let mut acc = Matrix::zeros(self.dims[i][rel.source()], self.dims[i][rel.target()]);
                for (c, p) in rel.terms() {
                    acc = acc.add(&self.right_path(i, p).scale(c));
                }
                if !acc.is_zero() {
                    out.push(Violation {
                        kind: ViolationKind::RightRelation,
                        witness: format!("`{}` on row {}", rel.display(t), u.vertex_id(i)),
                    });
                }
            }
        }
        for (qi, q) in u.arrows().iter().enumerate() {
            for (ri, r) in t.arrows().iter().enumerate() {
                let lhs = self.left[qi][r.source].mul(&self.right[ri][q.source]);
                let rhs = self.right[ri][q.target].mul(&self.left[qi][r.target]);
                if lhs != rhs {
                    out.push(Violation {
                        kind: ViolationKind::Commutation,
                        witness: format!("{} against {}", q.id, r.id),
                    });
                }
            }
        }
        out
    }

    /// Every basis element as `(i, j, index)`, in declaration order.
    pub fn basis_elements(&self) -> Vec<(usize, usize, usize)> {
        let mut out = Vec::new();
        for (i, row) in self.dims.iter().enumerate() {
            for (j, &d) in row.iter().enumerate() {
                out.extend((0..d).map(|k| (i, j, k)));
            }
        }
        out
    }
}

fn parse_pair(text: &str, u: &Quiver, t: &Quiver) -> Result<(usize, usize), String> {
    let inner = text
        .trim()
        .strip_prefix('(')
        .and_then(|s| s.strip_suffix(')'))
        .ok_or_else(|| format!("`{text}` is not a pair `(u, t)`"))?;
    let (a, b) = inner.split_once(',').ok_or_else(|| format!("`{text}` is not a pair `(u, t)`"))?;
    let i = u.vertex(a.trim()).ok_or_else(|| format!("unknown vertex `{}` of the left quiver", a.trim()))?;
    let j = t.vertex(b.trim()).ok_or_else(|| format!("unknown vertex `{}` of the right quiver", b.trim()))?;
    Ok((i, j))
}

/// Reads the bimodule file format:
///
/// ```text
/// dim (1',1) = 2
/// basis (1',1) = phi psi
/// left g1 (2',1)->(1',1) = [[1]]
/// right b1 (1',1)->(1',2) = [[1,0]]
/// ```
///
/// Blocks that are not mentioned act by zero.
pub fn parse_bimodule<F: Field>(text: &str, tu: &Presentation<F>, tt: &Presentation<F>) -> Result<Bimodule<F>, TextError> {
    let (u, t) = (&tu.quiver, &tt.quiver);
    let lines: Vec<(usize, &str)> = content_lines(text).collect();
    let mut dims = vec![vec![0; t.num_vertices()]; u.num_vertices()];
    let mut declared = HashSet::new();
    for &(ln, line) in &lines {
        let Some(rest) = line.strip_prefix("dim ") else { continue };
        let (lhs, rhs) = split_assignment(rest).ok_or_else(|| TextError::new(ln, "expected `dim (u, t) = n`"))?;
        let (i, j) = parse_pair(lhs, u, t).map_err(|m| TextError::new(ln, m))?;
        if !declared.insert((i, j)) {
            return Err(TextError::new(ln, format!("dimension of {lhs} given twice")));
        }
        dims[i][j] = parse_dim(ln, rhs)?;
    }
    check_total_dim(dims.iter().flatten().sum())?;
    let mut m = Bimodule::new(u, t, dims);
    for &(ln, line) in &lines {
        let (keyword, rest) = line.split_once(char::is_whitespace).unwrap_or((line, ""));
        let err = |msg: String| TextError::new(ln, msg);
        match keyword {
            "dim" => {}
            "basis" => {
                let (lhs, rhs) = split_assignment(rest).ok_or_else(|| err("expected `basis (u, t) = labels`".into()))?;
                let (i, j) = parse_pair(lhs, u, t).map_err(err)?;
                let labels = rhs.split_whitespace().map(str::to_string).collect();
                m.set_labels(i, j, labels).map_err(|e| err(e.to_string()))?;
            }
            "left" | "right" => {
                let (lhs, rhs) = split_assignment(rest).ok_or_else(|| err(format!("expected `{keyword} <arrow> (..)->(..) = [[..]]`")))?;
                let (arrow, pairs) = lhs.split_once(char::is_whitespace).ok_or_else(|| err("missing arrow".into()))?;
                let (from, to) = pairs.split_once("->").ok_or_else(|| err("expected `(..)->(..)`".into()))?;
                let (i, j) = parse_pair(from, u, t).map_err(err)?;
                let (i2, j2) = parse_pair(to, u, t).map_err(err)?;
                let rows = parse_matrix::<F>(rhs).map_err(err)?;
                if keyword == "left" {
                    let q = u.arrow_by_id(arrow).ok_or_else(|| err(format!("unknown arrow `{arrow}` of the left quiver")))?;
                    let a = u.arrow(q);
                    if (a.source, a.target) != (i, i2) || j != j2 {
                        return Err(err(format!("arrow `{arrow}` does not run {from}->{to}")));
                    }
                    let mat = shaped(rows, m.dims[i2][j], m.dims[i][j]).map_err(err)?;
                    m.set_left(q, j, mat).map_err(|e| err(e.to_string()))?;
                } else {
                    let r = t.arrow_by_id(arrow).ok_or_else(|| err(format!("unknown arrow `{arrow}` of the right quiver")))?;
                    let a = t.arrow(r);
                    if (a.target, a.source) != (j, j2) || i != i2 {
                        return Err(err(format!("arrow `{arrow}` does not run {from}->{to}")));
                    }
                    let mat = shaped(rows, m.dims[i][j2], m.dims[i][j]).map_err(err)?;
                    m.set_right(r, i, mat).map_err(|e| err(e.to_string()))?;
                }
            }
            other => return Err(err(format!("unknown statement `{other}`"))),
        }
    }
    Ok(m)
}

fn format_rows<F: Field>(m: &Matrix<F>) -> String {
    let rows: Vec<String> = (0..m.rows())
        .map(|r| format!("[{}]", m.row(r).iter().map(ToString::to_string).collect::<Vec<_>>().join(",")))
        .collect();
    format!("[{}]", rows.join(","))
}

pub fn format_bimodule<F: Field>(m: &Bimodule<F>, u: &Quiver, t: &Quiver) -> String {
    let mut out = String::new();
    let pair = |i: usize, j: usize| format!("({},{})", u.vertex_id(i), t.vertex_id(j));
    for (i, j, _) in m.basis_elements().into_iter().filter(|&(_, _, k)| k == 0) {
        let _ = writeln!(out, "dim {} = {}", pair(i, j), m.dims[i][j]);
        let _ = writeln!(out, "basis {} = {}", pair(i, j), m.labels[i][j].join(" "));
    }
    for (qi, q) in u.arrows().iter().enumerate() {
        for j in 0..t.num_vertices() {
            let mat = &m.left[qi][j];
            if !mat.is_zero() {
                let _ = writeln!(out, "left {} {}->{} = {}", q.id, pair(q.source, j), pair(q.target, j), format_rows(mat));
            }
        }
    }
    for (ri, r) in t.arrows().iter().enumerate() {
        for i in 0..u.num_vertices() {
            let mat = &m.right[ri][i];
            if !mat.is_zero() {
                let _ = writeln!(out, "right {} {}->{} = {}", r.id, pair(i, r.target), pair(i, r.source), format_rows(mat));
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dsl::parse_presentation;
    use crate::field::Rational;

    type Q = Rational;

    fn zigzag() -> Presentation<Q> {
        parse_presentation("quiver R\nfamily zigzag-A-inf window 1..3").unwrap()
    }

    fn linear() -> Presentation<Q> {
        parse_presentation("quiver Q\nfamily linear-A-inf window 1..3 suffix '").unwrap()
    }

    const EXAMPLE: &str = "
dim (1',1) = 2
basis (1',1) = phi psi
dim (1',2) = 1
basis (1',2) = theta
right b1 (1',1)->(1',2) = [[1,0]]
right a1 (1',2)->(1',1) = [[0],[1]]
";

    #[test]
    fn example_actions() {
        let (t, u) = (zigzag(), linear());
        let m: Bimodule<Q> = parse_bimodule(EXAMPLE, &u, &t).unwrap();
        let i = u.quiver.vertex("1'").unwrap();
        let (j1, j2) = (t.quiver.vertex("1").unwrap(), t.quiver.vertex("2").unwrap());
        let b1 = t.path_from_word("b1").unwrap();
        let a1 = t.path_from_word("a1").unwrap();
        let phi = [Q::one(), Q::zero()];
        let (pair, theta) = m.act(None, (i, j1), &phi, Some(&b1)).unwrap();
        assert_eq!(pair, (i, j2));
        assert_eq!(theta, vec![Q::one()]);
        let (_, psi) = m.act(None, (i, j2), &theta, Some(&a1)).unwrap();
        assert_eq!(psi, vec![Q::zero(), Q::one()]);
        let (same, v) = m.act(None, (i, j1), &phi, None).unwrap();
        assert_eq!((same, v), ((i, j1), phi.to_vec()));
    }

    #[test]
    fn example_relation_b1_a1_is_violated() {
        // b1.a1 = 0 in T, yet acting by a1 then b1 sends phi to psi.
        let (t, u) = (zigzag(), linear());
        let m: Bimodule<Q> = parse_bimodule(EXAMPLE, &u, &t).unwrap();
        let bad = m.validate(&u, &t);
        assert!(bad.iter().any(|v| v.kind == ViolationKind::RightRelation && v.witness.contains("b1.a1")));
    }

    #[test]
    fn zero_is_valid_and_roundtrips() {
        let (t, u) = (zigzag(), linear());
        let z: Bimodule<Q> = Bimodule::zero(&u.quiver, &t.quiver);
        assert!(z.validate(&u, &t).is_empty());
        let text = format_bimodule(&z, &u.quiver, &t.quiver);
        assert_eq!(parse_bimodule::<Q>(&text, &u, &t).unwrap(), z);
    }

    #[test]
    fn format_roundtrip() {
        let (t, u) = (zigzag(), linear());
        let m: Bimodule<Q> = parse_bimodule(EXAMPLE, &u, &t).unwrap();
        let text = format_bimodule(&m, &u.quiver, &t.quiver);
        assert_eq!(parse_bimodule::<Q>(&text, &u, &t).unwrap(), m);
    }

    #[test]
    fn parse_errors() {
        let (t, u) = (zigzag(), linear());
        let e = parse_bimodule::<Q>("dim (1',1) = 1\nright a1 (1',1)->(1',2) = [[1]]", &u, &t).unwrap_err();
        assert_eq!(e.line, 2);
        let e = parse_bimodule::<Q>("dim (1',1) = 1\nright b1 (1',1)->(1',2) = [[1,1]]", &u, &t).unwrap_err();
        assert!(e.msg.contains("expected a 0x1"), "{e}");
        assert!(parse_bimodule::<Q>("dim (9,1) = 1", &u, &t).is_err());
        assert!(parse_bimodule::<Q>("dim (1',1) = 1\ndim (1',2) = 1\nbasis (1',1) = x\nbasis (1',2) = x", &u, &t).is_err());
    }

    #[test]
    fn tensor_bimodules_are_valid() {
        use crate::pathcat::PathCategory;
        let (t, u) = (zigzag(), linear());
        let ct = PathCategory::new(t.opposite());
        let cu = PathCategory::new(u.clone());
        let p = Module::projective(&cu, u.quiver.vertex("2'").unwrap()).unwrap();
        let q = Module::projective(&ct, t.quiver.vertex("2").unwrap()).unwrap();
        let m = Bimodule::tensor(&u.quiver, &t.quiver, &p, &q);
        assert!(m.validate(&u, &t).is_empty());
        assert_eq!(m.dim(u.quiver.vertex("1'").unwrap(), t.quiver.vertex("2").unwrap()), p.dim(0) * q.dim(1));
    }
}
