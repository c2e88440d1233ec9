//! Quivers, paths, relations and presentations `KQ/I`.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

use crate::field::Field;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QuiverError {
    #[error("vertex `{0}` declared twice")]
    DuplicateVertex(String),
    #[error("arrow `{0}` declared twice")]
    DuplicateArrow(String),
    #[error("undeclared vertex `{0}`")]
    UnknownVertex(String),
    #[error("undeclared arrow `{0}`")]
    UnknownArrow(String),
    #[error("arrows do not compose: `{0}` ends where `{1}` does not start")]
    NotComposable(String, String),
    #[error("relation terms are not parallel")]
    NotParallel,
    #[error("relation has no nonzero term")]
    EmptyRelation,
    #[error("relation term `{0}` has length {1}; admissible relations need length at least 2")]
    NotAdmissible(String, usize),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Arrow {
    pub id: String,
    pub source: usize,
    pub target: usize,
}

/// A finite quiver. Vertices and arrows are addressed by index; ids are
/// kept for display and parsing.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Quiver {
    name: String,
    vertices: Vec<String>,
    vertex_index: HashMap<String, usize>,
    arrows: Vec<Arrow>,
    arrow_index: HashMap<String, usize>,
    arrow_rank: Vec<usize>,
}

impl Quiver {
    pub fn new(name: impl Into<String>) -> Self {
        Quiver { name: name.into(), ..Default::default() }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn set_name(&mut self, name: impl Into<String>) {
        self.name = name.into();
    }

    pub fn add_vertex(&mut self, id: impl Into<String>) -> Result<usize, QuiverError> {
        let id = id.into();
        if self.vertex_index.contains_key(&id) {
            return Err(QuiverError::DuplicateVertex(id));
        }
        let idx = self.vertices.len();
        self.vertex_index.insert(id.clone(), idx);
        self.vertices.push(id);
        Ok(idx)
    }

    pub fn add_arrow(&mut self, id: impl Into<String>, source: usize, target: usize) -> Result<usize, QuiverError> {
        let id = id.into();
        if self.arrow_index.contains_key(&id) {
            return Err(QuiverError::DuplicateArrow(id));
        }
        assert!(source < self.vertices.len() && target < self.vertices.len());
        let idx = self.arrows.len();
        self.arrow_index.insert(id.clone(), idx);
        self.arrows.push(Arrow { id, source, target });
        self.rerank();
        Ok(idx)
    }

    fn rerank(&mut self) {
        let mut order: Vec<usize> = (0..self.arrows.len()).collect();
        order.sort_by(|&a, &b| self.arrows[a].id.cmp(&self.arrows[b].id));
        self.arrow_rank = vec![0; order.len()];
        for (r, a) in order.into_iter().enumerate() {
            self.arrow_rank[a] = r;
        }
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn num_arrows(&self) -> usize {
        self.arrows.len()
    }

    pub fn vertex(&self, id: &str) -> Option<usize> {
        self.vertex_index.get(id).copied()
    }

    pub fn arrow_by_id(&self, id: &str) -> Option<usize> {
        self.arrow_index.get(id).copied()
    }

    pub fn require_vertex(&self, id: &str) -> Result<usize, QuiverError> {
        self.vertex(id).ok_or_else(|| QuiverError::UnknownVertex(id.to_string()))
    }

    pub fn require_arrow(&self, id: &str) -> Result<usize, QuiverError> {
        self.arrow_by_id(id).ok_or_else(|| QuiverError::UnknownArrow(id.to_string()))
    }

    pub fn vertex_id(&self, v: usize) -> &str {
        &self.vertices[v]
    }

    pub fn vertex_ids(&self) -> &[String] {
        &self.vertices
    }

    pub fn arrow(&self, a: usize) -> &Arrow {
        &self.arrows[a]
    }

    pub fn arrows(&self) -> &[Arrow] {
        &self.arrows
    }

    /// Position of the arrow id in sorted order; used for path ordering.
    pub fn arrow_rank(&self, a: usize) -> usize {
        self.arrow_rank[a]
    }

    pub fn arrows_from(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.arrows.len()).filter(move |&a| self.arrows[a].source == v)
    }

    pub fn arrows_into(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.arrows.len()).filter(move |&a| self.arrows[a].target == v)
    }

    pub fn is_acyclic(&self) -> bool {
        let n = self.vertices.len();
        let mut indeg = vec![0usize; n];
        for a in &self.arrows {
            indeg[a.target] += 1;
        }
        let mut stack: Vec<usize> = (0..n).filter(|&v| indeg[v] == 0).collect();
        let mut seen = 0;
        while let Some(v) = stack.pop() {
            seen += 1;
            for a in self.arrows_from(v) {
                let t = self.arrows[a].target;
                indeg[t] -= 1;
                if indeg[t] == 0 {
                    stack.push(t);
                }
            }
        }
        seen == n
    }

    /// Same vertices, every arrow reversed; arrow ids are kept.
    pub fn opposite(&self) -> Quiver {
        let mut q = Quiver::new(format!("{}^op", self.name));
        for v in &self.vertices {
            q.add_vertex(v.clone()).expect("ids are unique");
        }
        for a in &self.arrows {
            q.add_arrow(a.id.clone(), a.target, a.source).expect("ids are unique");
        }
        q
    }

    pub fn compare_paths(&self, p: &Path, q: &Path) -> Ordering {
        p.len()
            .cmp(&q.len())
            .then_with(|| {
                let a = p.arrows.iter().map(|&x| self.arrow_rank[x]);
                let b = q.arrows.iter().map(|&x| self.arrow_rank[x]);
                a.cmp(b)
            })
            .then_with(|| p.source.cmp(&q.source))
            .then_with(|| p.target.cmp(&q.target))
    }
}

/// A path stored in traversal order: `arrows[0]` is applied first.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Path {
    pub source: usize,
    pub target: usize,
    pub arrows: Vec<usize>,
}

impl Path {
    pub fn trivial(v: usize) -> Path {
        Path { source: v, target: v, arrows: Vec::new() }
    }

    pub fn from_arrows(q: &Quiver, arrows: Vec<usize>) -> Result<Path, QuiverError> {
        let first = *arrows.first().expect("use Path::trivial for empty paths");
        for w in arrows.windows(2) {
            if q.arrow(w[0]).target != q.arrow(w[1]).source {
                return Err(QuiverError::NotComposable(q.arrow(w[0]).id.clone(), q.arrow(w[1]).id.clone()));
            }
        }
        let last = *arrows.last().expect("nonempty");
        Ok(Path { source: q.arrow(first).source, target: q.arrow(last).target, arrows })
    }

    pub fn arrow(q: &Quiver, a: usize) -> Path {
        Path { source: q.arrow(a).source, target: q.arrow(a).target, arrows: vec![a] }
    }

    pub fn len(&self) -> usize {
        self.arrows.len()
    }

    pub fn is_trivial(&self) -> bool {
        self.arrows.is_empty()
    }

    /// `self` followed by `next`.
    pub fn then(&self, next: &Path) -> Path {
        assert_eq!(self.target, next.source, "paths do not compose");
        let mut arrows = self.arrows.clone();
        arrows.extend_from_slice(&next.arrows);
        Path { source: self.source, target: next.target, arrows }
    }

    /// Function-order rendering, e.g. `b1.a1` for `a1` then `b1`.
    pub fn display<'a>(&'a self, q: &'a Quiver) -> PathDisplay<'a> {
        PathDisplay { path: self, quiver: q }
    }
}

pub struct PathDisplay<'a> {
    path: &'a Path,
    quiver: &'a Quiver,
}

impl fmt::Display for PathDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.path.arrows.is_empty() {
            return write!(f, "e_{}", self.quiver.vertex_id(self.path.source));
        }
        for (k, &a) in self.path.arrows.iter().rev().enumerate() {
            if k > 0 {
                write!(f, ".")?;
            }
            write!(f, "{}", self.quiver.arrow(a).id)?;
        }
        Ok(())
    }
}

/// A linear combination of parallel paths. Terms are merged by path and
/// never carry a zero coefficient.
#[derive(Debug, Clone, PartialEq)]
pub struct Relation<F> {
    terms: Vec<(F, Path)>,
}

impl<F: Field> Relation<F> {
    /// Checks parallelism and nonvanishing; admissibility is separate.
    pub fn new(terms: Vec<(F, Path)>) -> Result<Self, QuiverError> {
        let mut merged: Vec<(F, Path)> = Vec::new();
        for (c, p) in terms {
            match merged.iter_mut().find(|(_, q)| *q == p) {
                Some(slot) => slot.0 = slot.0.add(&c),
                None => merged.push((c, p)),
            }
        }
        merged.retain(|(c, _)| !c.is_zero());
        let first = merged.first().ok_or(QuiverError::EmptyRelation)?;
        let (s, t) = (first.1.source, first.1.target);
        if merged.iter().any(|(_, p)| p.source != s || p.target != t) {
            return Err(QuiverError::NotParallel);
        }
        Ok(Relation { terms: merged })
    }

    pub fn terms(&self) -> &[(F, Path)] {
        &self.terms
    }

    pub fn source(&self) -> usize {
        self.terms[0].1.source
    }

    pub fn target(&self) -> usize {
        self.terms[0].1.target
    }

    pub fn min_len(&self) -> usize {
        self.terms.iter().map(|(_, p)| p.len()).min().unwrap_or(0)
    }

    pub fn max_len(&self) -> usize {
        self.terms.iter().map(|(_, p)| p.len()).max().unwrap_or(0)
    }

    pub fn is_homogeneous(&self) -> bool {
        self.min_len() == self.max_len()
    }

    pub fn check_admissible(&self, q: &Quiver) -> Result<(), QuiverError> {
        match self.terms.iter().find(|(_, p)| p.len() < 2) {
            Some((_, p)) => Err(QuiverError::NotAdmissible(p.display(q).to_string(), p.len())),
            None => Ok(()),
        }
    }

    pub fn map_paths(&self, f: impl Fn(&Path) -> Path) -> Relation<F> {
        Relation { terms: self.terms.iter().map(|(c, p)| (c.clone(), f(p))).collect() }
    }

    pub fn display<'a>(&'a self, q: &'a Quiver) -> RelationDisplay<'a, F> {
        RelationDisplay { rel: self, quiver: q }
    }
}

pub struct RelationDisplay<'a, F> {
    rel: &'a Relation<F>,
    quiver: &'a Quiver,
}

impl<F: Field> fmt::Display for RelationDisplay<'_, F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, (c, p)) in self.rel.terms.iter().enumerate() {
            let neg = c.neg();
            let negative = F::characteristic() == 0 && c.to_string().starts_with('-');
            let (sign, mag) = if negative { ("-", neg) } else { ("+", c.clone()) };
            if k == 0 {
                if negative {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            if !mag.is_one() {
                write!(f, "{mag}*")?;
            }
            write!(f, "{}", p.display(self.quiver))?;
        }
        Ok(())
    }
}

/// A quiver with relations, plus the record of relations dropped when a
/// window was cut out of an infinite family.
#[derive(Debug, Clone)]
pub struct Presentation<F> {
    pub quiver: Quiver,
    pub relations: Vec<Relation<F>>,
    pub boundary: Vec<String>,
}

impl<F: Field> Presentation<F> {
    pub fn new(quiver: Quiver) -> Self {
        Presentation { quiver, relations: Vec::new(), boundary: Vec::new() }
    }

    pub fn name(&self) -> &str {
        self.quiver.name()
    }

    /// Builds a relation from function-order arrow-id strings such as
    /// `"b1.a1"`.
    pub fn relation_from_words(&self, terms: &[(i64, &str)]) -> Result<Relation<F>, QuiverError> {
        let mut out = Vec::new();
        for &(c, word) in terms {
            out.push((F::from_i64(c), self.path_from_word(word)?));
        }
        Relation::new(out)
    }

    /// Parses a function-order word `a_k. … .a_1` into a path.
    pub fn path_from_word(&self, word: &str) -> Result<Path, QuiverError> {
        let mut arrows = Vec::new();
        for id in word.split('.').rev() {
            arrows.push(self.quiver.require_arrow(id.trim())?);
        }
        Path::from_arrows(&self.quiver, arrows)
    }

    pub fn add_relation(&mut self, r: Relation<F>) {
        self.relations.push(r);
    }

    /// The presentation with all arrows and relation paths reversed.
    pub fn opposite(&self) -> Presentation<F> {
        let quiver = self.quiver.opposite();
        let relations = self
            .relations
            .iter()
            .map(|r| {
                r.map_paths(|p| {
                    let mut arrows = p.arrows.clone();
                    arrows.reverse();
                    Path { source: p.target, target: p.source, arrows }
                })
            })
            .collect();
        Presentation { quiver, relations, boundary: self.boundary.clone() }
    }

    /// Full subquiver on `keep` (indices into this quiver) with the
    /// relations that live entirely inside it. Returns the new
    /// presentation and the map old vertex -> new vertex.
    pub fn full_subpresentation(&self, keep: &[usize]) -> (Presentation<F>, Vec<Option<usize>>) {
        let mut q = Quiver::new(self.quiver.name().to_string());
        let mut vmap = vec![None; self.quiver.num_vertices()];
        for &v in keep {
            vmap[v] = Some(q.add_vertex(self.quiver.vertex_id(v)).expect("unique"));
        }
        let mut amap = vec![None; self.quiver.num_arrows()];
        for (a, arrow) in self.quiver.arrows().iter().enumerate() {
            if let (Some(s), Some(t)) = (vmap[arrow.source], vmap[arrow.target]) {
                amap[a] = Some(q.add_arrow(arrow.id.clone(), s, t).expect("unique"));
            }
        }
        let mut relations = Vec::new();
        let mut boundary = self.boundary.clone();
        for r in &self.relations {
            let inside = r.terms().iter().all(|(_, p)| p.arrows.iter().all(|&a| amap[a].is_some()))
                && vmap[r.source()].is_some()
                && vmap[r.target()].is_some();
            if inside {
                relations.push(r.map_paths(|p| Path {
                    source: vmap[p.source].unwrap(),
                    target: vmap[p.target].unwrap(),
                    arrows: p.arrows.iter().map(|&a| amap[a].unwrap()).collect(),
                }));
            } else if r.terms().iter().any(|(_, p)| p.arrows.iter().any(|&a| amap[a].is_some())) {
                boundary.push(r.display(&self.quiver).to_string());
            }
        }
        (Presentation { quiver: q, relations, boundary }, vmap)
    }
}

/// All raw paths from `a` to `b` of length at most `max_len`, ordered by
/// length and then lexicographically by arrow id.
pub fn enumerate_paths(q: &Quiver, a: usize, b: usize, max_len: usize) -> Vec<Path> {
    let mut out = Vec::new();
    let mut frontier = vec![Path::trivial(a)];
    for len in 0..=max_len {
        for p in &frontier {
            if p.target == b {
                out.push(p.clone());
            }
        }
        if len == max_len {
            break;
        }
        let mut next = Vec::new();
        for p in &frontier {
            for x in q.arrows_from(p.target) {
                let mut arrows = p.arrows.clone();
                arrows.push(x);
                next.push(Path { source: a, target: q.arrow(x).target, arrows });
            }
        }
        frontier = next;
    }
    out.sort_by(|p, r| q.compare_paths(p, r));
    out
}

/// Product quiver together with the pair each product vertex stands for.
#[derive(Debug, Clone)]
pub struct ProductQuiver {
    pub quiver: Quiver,
    pub pairs: Vec<(usize, usize)>,
    /// Arrow of the product for (arrow of left factor, vertex of right factor).
    pub left_arrows: HashMap<(usize, usize), usize>,
    /// Arrow of the product for (vertex of left factor, arrow of right factor).
    pub right_arrows: HashMap<(usize, usize), usize>,
}

impl ProductQuiver {
    pub fn vertex(&self, i: usize, j: usize, right_count: usize) -> usize {
        i * right_count + j
    }
}

pub fn product_quiver(q1: &Quiver, q2: &Quiver) -> ProductQuiver {
    let mut q = Quiver::new(format!("{}x{}", q1.name(), q2.name()));
    let mut pairs = Vec::new();
    for i in 0..q1.num_vertices() {
        for j in 0..q2.num_vertices() {
            q.add_vertex(format!("({},{})", q1.vertex_id(i), q2.vertex_id(j))).expect("unique pairs");
            pairs.push((i, j));
        }
    }
    let n2 = q2.num_vertices();
    let mut right_arrows = HashMap::new();
    for i in 0..q1.num_vertices() {
        for (b, beta) in q2.arrows().iter().enumerate() {
            let id = format!("({},{})", q1.vertex_id(i), beta.id);
            let x = q.add_arrow(id, i * n2 + beta.source, i * n2 + beta.target).expect("unique");
            right_arrows.insert((i, b), x);
        }
    }
    let mut left_arrows = HashMap::new();
    for (a, alpha) in q1.arrows().iter().enumerate() {
        for j in 0..n2 {
            let id = format!("({},{})", alpha.id, q2.vertex_id(j));
            let x = q.add_arrow(id, alpha.source * n2 + j, alpha.target * n2 + j).expect("unique");
            left_arrows.insert((a, j), x);
        }
    }
    ProductQuiver { quiver: q, pairs, left_arrows, right_arrows }
}

/// Generators of the box ideal `I □ I'` on the product quiver.
pub fn box_ideal<F: Field>(p1: &Presentation<F>, p2: &Presentation<F>, prod: &ProductQuiver) -> Vec<Relation<F>> {
    let (q1, q2) = (&p1.quiver, &p2.quiver);
    let n2 = q2.num_vertices();
    let mut out = Vec::new();
    for r in &p1.relations {
        for j in 0..n2 {
            out.push(r.map_paths(|p| Path {
                source: p.source * n2 + j,
                target: p.target * n2 + j,
                arrows: p.arrows.iter().map(|&a| prod.left_arrows[&(a, j)]).collect(),
            }));
        }
    }
    for i in 0..q1.num_vertices() {
        for r in &p2.relations {
            out.push(r.map_paths(|p| Path {
                source: i * n2 + p.source,
                target: i * n2 + p.target,
                arrows: p.arrows.iter().map(|&b| prod.right_arrows[&(i, b)]).collect(),
            }));
        }
    }
    for (a, alpha) in q1.arrows().iter().enumerate() {
        for (b, beta) in q2.arrows().iter().enumerate() {
            let src = alpha.source * n2 + beta.source;
            let dst = alpha.target * n2 + beta.target;
            let first = Path {
                source: src,
                target: dst,
                arrows: vec![prod.left_arrows[&(a, beta.source)], prod.right_arrows[&(alpha.target, b)]],
            };
            let second = Path {
                source: src,
                target: dst,
                arrows: vec![prod.right_arrows[&(alpha.source, b)], prod.left_arrows[&(a, beta.target)]],
            };
            out.push(Relation::new(vec![(F::one(), first), (F::one().neg(), second)]).expect("parallel"));
        }
    }
    out
}

pub fn product_presentation<F: Field>(p1: &Presentation<F>, p2: &Presentation<F>) -> (Presentation<F>, ProductQuiver) {
    let prod = product_quiver(&p1.quiver, &p2.quiver);
    let relations = box_ideal(p1, p2, &prod);
    let pres = Presentation { quiver: prod.quiver.clone(), relations, boundary: Vec::new() };
    (pres, prod)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Rational;

    fn a3() -> Quiver {
        let mut q = Quiver::new("A3");
        for v in ["1", "2", "3"] {
            q.add_vertex(v).unwrap();
        }
        q.add_arrow("x", 0, 1).unwrap();
        q.add_arrow("y", 1, 2).unwrap();
        q
    }

    #[test]
    fn linear_paths() {
        let q = a3();
        assert_eq!(enumerate_paths(&q, 0, 2, 5).len(), 1);
        assert_eq!(enumerate_paths(&q, 2, 0, 5).len(), 0);
        assert_eq!(enumerate_paths(&q, 1, 1, 0), vec![Path::trivial(1)]);
        assert!(q.is_acyclic());
    }

    #[test]
    fn relation_checks() {
        let q = a3();
        let p = Path::from_arrows(&q, vec![0, 1]).unwrap();
        assert!(Path::from_arrows(&q, vec![1, 0]).is_err());
        let r = Relation::<Rational>::new(vec![(Rational::one(), p.clone()), (Rational::one().neg(), p.clone())]);
        assert_eq!(r.unwrap_err(), QuiverError::EmptyRelation);
        let single = Relation::<Rational>::new(vec![(Rational::one(), Path::arrow(&q, 0))]).unwrap();
        assert!(single.check_admissible(&q).is_err());
        let ok = Relation::<Rational>::new(vec![(Rational::from_i64(2), p)]).unwrap();
        assert_eq!(ok.display(&q).to_string(), "2*y.x");
    }

    #[test]
    fn square_product() {
        let mut a2 = Quiver::new("A2");
        a2.add_vertex("1").unwrap();
        a2.add_vertex("2").unwrap();
        a2.add_arrow("x", 0, 1).unwrap();
        let p = Presentation::<Rational>::new(a2);
        let (prod, pq) = product_presentation(&p, &p);
        assert_eq!(pq.quiver.num_vertices(), 4);
        assert_eq!(pq.quiver.num_arrows(), 4);
        assert_eq!(prod.relations.len(), 1);
    }
}
