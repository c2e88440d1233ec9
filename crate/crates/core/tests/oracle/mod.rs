//! Brute-force oracles that share no linear algebra with the library:
//! hom dimensions by enumerating paths and spanning the ideal naively, and
//! `Ext^1` over `F_2` by listing every extension cocycle.

#![allow(dead_code)]

use std::collections::{HashMap, HashSet};

use pathcat::module::Module;
use pathcat::{Field, Fp, Presentation};

type Word = Vec<usize>;

/// Paths `a -> b` of length exactly `len`, as arrow lists in traversal order.
fn paths_of_len(q: &pathcat::Quiver, a: usize, b: usize, len: usize) -> Vec<Word> {
    let mut out = Vec::new();
    let mut stack: Vec<(usize, Word)> = vec![(a, Vec::new())];
    while let Some((v, w)) = stack.pop() {
        if w.len() == len {
            if v == b {
                out.push(w);
            }
            continue;
        }
        for (k, arrow) in q.arrows().iter().enumerate() {
            if arrow.source == v {
                let mut next = w.clone();
                next.push(k);
                stack.push((arrow.target, next));
            }
        }
    }
    out
}

fn paths_upto(q: &pathcat::Quiver, a: usize, b: usize, max: usize) -> Vec<Word> {
    (0..=max).flat_map(|l| paths_of_len(q, a, b, l)).collect()
}

/// Number of paths `a -> b` of length at most `max`, by depth-first search.
pub fn path_count(q: &pathcat::Quiver, a: usize, b: usize, max: usize) -> usize {
    paths_upto(q, a, b, max).len()
}

fn rank<F: Field>(mut rows: Vec<Vec<F>>) -> usize {
    let mut r = 0;
    let cols = rows.first().map_or(0, Vec::len);
    for c in 0..cols {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else { continue };
        rows.swap(r, p);
        let inv = rows[r][c].inv().expect("pivot is nonzero");
        for i in 0..rows.len() {
            if i != r && !rows[i][c].is_zero() {
                let f = rows[i][c].mul(&inv);
                for k in 0..cols {
                    let v = rows[r][k].mul(&f);
                    rows[i][k] = rows[i][k].sub(&v);
                }
            }
        }
        r += 1;
    }
    r
}

fn relation_words<F: Field>(pres: &Presentation<F>) -> Vec<(usize, usize, Vec<(F, Word)>)> {
    pres.relations
        .iter()
        .map(|r| (r.source(), r.target(), r.terms().iter().map(|(c, p)| (c.clone(), p.arrows.clone())).collect()))
        .collect()
}

/// `dim (KQ/I)(a, b)` for `paths` a basis of all candidate paths and ideal
/// generators `u ρ w` restricted to the given length budget.
fn quotient_dim<F: Field>(pres: &Presentation<F>, a: usize, b: usize, lens: impl Fn(usize) -> bool, max: usize) -> usize {
    let q = &pres.quiver;
    let basis: Vec<Word> = (0..=max).filter(|&l| lens(l)).flat_map(|l| paths_of_len(q, a, b, l)).collect();
    if basis.is_empty() {
        return 0;
    }
    let index: HashMap<&Word, usize> = basis.iter().enumerate().map(|(k, w)| (w, k)).collect();
    let mut rows = Vec::new();
    for (s, t, terms) in relation_words(pres) {
        for u in paths_upto(q, a, s, max) {
            for w in paths_upto(q, t, b, max) {
                let mut row = vec![F::zero(); basis.len()];
                let mut inside = true;
                for (c, p) in &terms {
                    let word: Word = u.iter().chain(p).chain(&w).copied().collect();
                    match index.get(&word) {
                        Some(&k) => row[k] = row[k].add(c),
                        None => inside = false,
                    }
                }
                if inside {
                    rows.push(row);
                }
            }
        }
    }
    basis.len() - rank(rows)
}

/// Hom dimension by brute force. Acyclic quivers are enumerated outright;
/// otherwise the relations must be homogeneous and the graded pieces are
/// computed until a whole degree of the projective at `a` vanishes.
pub fn hom_dim<F: Field>(pres: &Presentation<F>, a: usize, b: usize) -> usize {
    let q = &pres.quiver;
    let n = q.num_vertices();
    if q.is_acyclic() {
        return quotient_dim(pres, a, b, |_| true, n);
    }
    assert!(pres.relations.iter().all(|r| r.is_homogeneous()), "oracle needs homogeneous relations on cyclic quivers");
    let mut total = 0;
    for d in 0.. {
        let piece: Vec<usize> = (0..n).map(|y| quotient_dim(pres, a, y, |l| l == d, d)).collect();
        total += piece[b];
        if piece.iter().all(|&x| x == 0) {
            break;
        }
        assert!(d < 64, "graded pieces do not vanish");
    }
    total
}

type F2 = Fp<2>;

#[derive(Clone)]
struct Bits {
    dims: Vec<usize>,
    /// `act[α][r][c]` in `{0,1}`.
    act: Vec<Vec<Vec<u8>>>,
}

fn bits(m: &Module<F2>, pres: &Presentation<F2>) -> Bits {
    let act = (0..pres.quiver.num_arrows())
        .map(|a| {
            let x = m.action(a);
            (0..x.rows()).map(|r| (0..x.cols()).map(|c| x.get(r, c).value() as u8).collect()).collect()
        })
        .collect();
    Bits { dims: m.dims().to_vec(), act }
}

fn mat_mul(x: &[Vec<u8>], y: &[Vec<u8>], inner: usize, cols: usize) -> Vec<Vec<u8>> {
    x.iter().map(|row| (0..cols).map(|c| (0..inner).fold(0, |acc, k| acc ^ (row[k] & y[k][c]))).collect()).collect()
}

fn identity(n: usize) -> Vec<Vec<u8>> {
    (0..n).map(|r| (0..n).map(|c| u8::from(r == c)).collect()).collect()
}

fn satisfies(pres: &Presentation<F2>, m: &Bits) -> bool {
    let q = &pres.quiver;
    pres.relations.iter().all(|r| {
        let (s, t) = (r.source(), r.target());
        let mut sum = vec![vec![0u8; m.dims[s]]; m.dims[t]];
        for (c, p) in r.terms() {
            if c.value() % 2 == 0 {
                continue;
            }
            let mut acc = identity(m.dims[s]);
            let mut v = s;
            for &a in &p.arrows {
                let w = q.arrow(a).target;
                acc = mat_mul(&m.act[a], &acc, m.dims[v], m.dims[s]);
                v = w;
            }
            for (row, add) in sum.iter_mut().zip(&acc) {
                for (x, y) in row.iter_mut().zip(add) {
                    *x ^= y;
                }
            }
        }
        sum.iter().flatten().all(|&x| x == 0)
    })
}

/// `dim Ext^1(A, B)` over `F_2` by listing all `c` with
/// `[[B, c], [0, A]]` a module and all coboundaries `B h - h A`.
pub fn ext1_f2(pres: &Presentation<F2>, a: &Module<F2>, b: &Module<F2>) -> usize {
    let q = &pres.quiver;
    let (ma, mb) = (bits(a, pres), bits(b, pres));
    let n: usize = q.arrows().iter().map(|arr| mb.dims[arr.target] * ma.dims[arr.source]).sum();
    assert!(n <= 20, "cocycle space too large for brute force: {n} bits");
    let dims: Vec<usize> = ma.dims.iter().zip(&mb.dims).map(|(x, y)| x + y).collect();
    let build = |mask: u64| -> Bits {
        let mut act = Vec::new();
        let mut bit = 0;
        for (k, arr) in q.arrows().iter().enumerate() {
            let (s, t) = (arr.source, arr.target);
            let mut e = vec![vec![0u8; dims[s]]; dims[t]];
            for r in 0..mb.dims[t] {
                for c in 0..mb.dims[s] {
                    e[r][c] = mb.act[k][r][c];
                }
            }
            for r in 0..ma.dims[t] {
                for c in 0..ma.dims[s] {
                    e[mb.dims[t] + r][mb.dims[s] + c] = ma.act[k][r][c];
                }
            }
            for r in 0..mb.dims[t] {
                for c in 0..ma.dims[s] {
                    e[r][mb.dims[s] + c] = ((mask >> bit) & 1) as u8;
                    bit += 1;
                }
            }
            act.push(e);
        }
        Bits { dims: dims.clone(), act }
    };
    let cocycles = (0..1u64 << n).filter(|&mask| satisfies(pres, &build(mask))).count();

    let hslots: usize = (0..q.num_vertices()).map(|v| ma.dims[v] * mb.dims[v]).sum();
    assert!(hslots <= 20, "homotopy space too large for brute force");
    let mut boundaries = HashSet::new();
    for hmask in 0..1u64 << hslots {
        let mut h: Vec<Vec<Vec<u8>>> = Vec::new();
        let mut bit = 0;
        for v in 0..q.num_vertices() {
            let mut x = vec![vec![0u8; ma.dims[v]]; mb.dims[v]];
            for row in x.iter_mut() {
                for e in row.iter_mut() {
                    *e = ((hmask >> bit) & 1) as u8;
                    bit += 1;
                }
            }
            h.push(x);
        }
        let mut mask = 0u64;
        let mut bit = 0;
        for (k, arr) in q.arrows().iter().enumerate() {
            let (s, t) = (arr.source, arr.target);
            let bh = mat_mul(&mb.act[k], &h[s], mb.dims[s], ma.dims[s]);
            let ha = mat_mul(&h[t], &ma.act[k], ma.dims[t], ma.dims[s]);
            for r in 0..mb.dims[t] {
                for c in 0..ma.dims[s] {
                    mask |= u64::from(bh[r][c] ^ ha[r][c]) << bit;
                    bit += 1;
                }
            }
        }
        boundaries.insert(mask);
    }
    let ratio = cocycles / boundaries.len();
    assert_eq!(ratio * boundaries.len(), cocycles, "cocycles do not form a union of cosets");
    assert!(ratio.is_power_of_two());
    ratio.trailing_zeros() as usize
}
