//! Finite windows of the infinite quivers used throughout: the alternating
//! A-infinity quiver, the zigzag quiver with its nilpotent relations, and
//! the mesh category of ZA-infinity.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::field::Field;
use crate::quiver::{Path, Presentation, Quiver, QuiverError, Relation};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FamilyKind {
    /// 1 <- 2 -> 3 <- 4 -> 5 ...: even vertices are sources.
    LinearAInf,
    /// a_t: t -> t+1, b_t: t+1 -> t with the loop at 1 and all
    /// same-direction composites zero, and the two loops at t+1 equal.
    ZigzagAInf,
    /// Vertices (i, j), i >= 1, arrows (i,j) -> (i-1,j+1) and (i,j) -> (i+1,j).
    MeshZAInf,
}

impl FromStr for FamilyKind {
    type Err = FamilyError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "linear-A-inf" => Ok(FamilyKind::LinearAInf),
            "zigzag-A-inf" => Ok(FamilyKind::ZigzagAInf),
            "mesh-ZA-inf" => Ok(FamilyKind::MeshZAInf),
            other => Err(FamilyError::UnknownFamily(other.to_string())),
        }
    }
}

impl fmt::Display for FamilyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FamilyKind::LinearAInf => "linear-A-inf",
            FamilyKind::ZigzagAInf => "zigzag-A-inf",
            FamilyKind::MeshZAInf => "mesh-ZA-inf",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FamilyError {
    #[error("unknown family `{0}`")]
    UnknownFamily(String),
    #[error("family {0} expects {1} range(s), got {2}")]
    RangeCount(FamilyKind, usize, usize),
    #[error("window is empty")]
    EmptyWindow,
    #[error("window has {0} vertices; at most {MAX_WINDOW_VERTICES} are supported")]
    TooLarge(i128),
    #[error("bad range `{0}`; expected lo..hi")]
    BadRange(String),
    #[error(transparent)]
    Quiver(#[from] QuiverError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FamilySpec {
    pub kind: FamilyKind,
    /// Inclusive ranges. One range for the A-infinity families; rows then
    /// columns for the mesh family.
    pub ranges: Vec<(i64, i64)>,
    /// Appended to every vertex and arrow id.
    pub suffix: String,
}

impl FamilySpec {
    pub fn new(kind: FamilyKind, ranges: Vec<(i64, i64)>) -> Self {
        FamilySpec { kind, ranges, suffix: String::new() }
    }

    pub fn with_suffix(mut self, suffix: &str) -> Self {
        self.suffix = suffix.to_string();
        self
    }
}

/// Upper bound on the number of vertices a single window may materialize.
pub const MAX_WINDOW_VERTICES: i128 = 4096;

pub fn parse_range(text: &str) -> Result<(i64, i64), FamilyError> {
    let (lo, hi) = text.split_once("..").ok_or_else(|| FamilyError::BadRange(text.to_string()))?;
    let lo = lo.trim().parse().map_err(|_| FamilyError::BadRange(text.to_string()))?;
    let hi = hi.trim().parse().map_err(|_| FamilyError::BadRange(text.to_string()))?;
    Ok((lo, hi))
}

/// Builds the window as a standalone presentation.
pub fn materialize_window<F: Field>(spec: &FamilySpec) -> Result<Presentation<F>, FamilyError> {
    let mut pres = Presentation::new(Quiver::new(spec.kind.to_string()));
    add_family(&mut pres, spec)?;
    Ok(pres)
}

/// Adds the window's vertices, arrows and relations to `pres`.
pub fn add_family<F: Field>(pres: &mut Presentation<F>, spec: &FamilySpec) -> Result<(), FamilyError> {
    let expected = match spec.kind {
        FamilyKind::MeshZAInf => 2,
        _ => 1,
    };
    if spec.ranges.len() != expected {
        return Err(FamilyError::RangeCount(spec.kind, expected, spec.ranges.len()));
    }
    let size = spec
        .ranges
        .iter()
        .enumerate()
        .map(|(k, &(lo, hi))| {
            let lo = if k == 0 { lo.max(1) } else { lo };
            (i128::from(hi) - i128::from(lo) + 1).max(0)
        })
        .product::<i128>();
    if size > MAX_WINDOW_VERTICES {
        return Err(FamilyError::TooLarge(size));
    }
    match spec.kind {
        FamilyKind::LinearAInf => linear(pres, spec),
        FamilyKind::ZigzagAInf => zigzag(pres, spec),
        FamilyKind::MeshZAInf => mesh(pres, spec),
    }
}

fn a_range(spec: &FamilySpec) -> Result<(i64, i64), FamilyError> {
    let (lo, hi) = spec.ranges[0];
    let lo = lo.max(1);
    if lo > hi {
        return Err(FamilyError::EmptyWindow);
    }
    Ok((lo, hi))
}

fn linear<F: Field>(pres: &mut Presentation<F>, spec: &FamilySpec) -> Result<(), FamilyError> {
    let (lo, hi) = a_range(spec)?;
    let sfx = &spec.suffix;
    for t in lo..=hi {
        pres.quiver.add_vertex(format!("{t}{sfx}"))?;
    }
    for t in lo..hi {
        let (s, d) = if t % 2 == 1 { (t + 1, t) } else { (t, t + 1) };
        let s = pres.quiver.require_vertex(&format!("{s}{sfx}"))?;
        let d = pres.quiver.require_vertex(&format!("{d}{sfx}"))?;
        pres.quiver.add_arrow(format!("g{t}{sfx}"), s, d)?;
    }
    Ok(())
}

/// Adds a relation given as function-order words if every arrow exists;
/// records it in the boundary report if only some do.
fn add_windowed<F: Field>(pres: &mut Presentation<F>, terms: &[(i64, String)]) -> Result<(), FamilyError> {
    let present = |w: &str| w.split('.').all(|a| pres.quiver.arrow_by_id(a).is_some());
    let touches = |w: &str| w.split('.').any(|a| pres.quiver.arrow_by_id(a).is_some());
    if terms.iter().all(|(_, w)| present(w)) {
        let mut out = Vec::new();
        for (c, w) in terms {
            out.push((F::from_i64(*c), pres.path_from_word(w)?));
        }
        let r = Relation::new(out)?;
        pres.add_relation(r);
    } else if terms.iter().any(|(_, w)| touches(w)) {
        let text: Vec<String> = terms
            .iter()
            .enumerate()
            .map(|(k, (c, w))| match (k, *c) {
                (0, 1) => w.clone(),
                (0, -1) => format!("-{w}"),
                (_, 1) => format!("+ {w}"),
                (_, -1) => format!("- {w}"),
                (_, c) => format!("+ {c}*{w}"),
            })
            .collect();
        pres.boundary.push(text.join(" "));
    }
    Ok(())
}

fn zigzag<F: Field>(pres: &mut Presentation<F>, spec: &FamilySpec) -> Result<(), FamilyError> {
    let (lo, hi) = a_range(spec)?;
    let sfx = spec.suffix.clone();
    for t in lo..=hi {
        pres.quiver.add_vertex(format!("{t}{sfx}"))?;
    }
    for t in lo..hi {
        let s = pres.quiver.require_vertex(&format!("{t}{sfx}"))?;
        let d = pres.quiver.require_vertex(&format!("{}{sfx}", t + 1))?;
        pres.quiver.add_arrow(format!("a{t}{sfx}"), s, d)?;
        pres.quiver.add_arrow(format!("b{t}{sfx}"), d, s)?;
    }
    let a = |t: i64| format!("a{t}{sfx}");
    let b = |t: i64| format!("b{t}{sfx}");
    if lo == 1 {
        add_windowed(pres, &[(1, format!("{}.{}", b(1), a(1)))])?;
    }
    for t in (lo - 2).max(1)..=hi {
        add_windowed(pres, &[(1, format!("{}.{}", a(t + 1), a(t)))])?;
        add_windowed(pres, &[(1, format!("{}.{}", b(t), b(t + 1)))])?;
        add_windowed(pres, &[(1, format!("{}.{}", a(t), b(t))), (-1, format!("{}.{}", b(t + 1), a(t + 1)))])?;
    }
    Ok(())
}

pub fn mesh_vertex_id(i: i64, j: i64, sfx: &str) -> String {
    format!("({i},{j}){sfx}")
}

fn mesh<F: Field>(pres: &mut Presentation<F>, spec: &FamilySpec) -> Result<(), FamilyError> {
    let (rlo, rhi) = spec.ranges[0];
    let (clo, chi) = spec.ranges[1];
    let rlo = rlo.max(1);
    if rlo > rhi || clo > chi {
        return Err(FamilyError::EmptyWindow);
    }
    let sfx = spec.suffix.clone();
    let inside = |i: i64, j: i64| (rlo..=rhi).contains(&i) && (clo..=chi).contains(&j);
    for i in rlo..=rhi {
        for j in clo..=chi {
            pres.quiver.add_vertex(mesh_vertex_id(i, j, &sfx))?;
        }
    }
    let up = |i: i64, j: i64| format!("u({i},{j}){sfx}");
    let down = |i: i64, j: i64| format!("d({i},{j}){sfx}");
    for i in rlo..=rhi {
        for j in clo..=chi {
            let here = pres.quiver.require_vertex(&mesh_vertex_id(i, j, &sfx))?;
            if i >= 2 && inside(i - 1, j + 1) {
                let there = pres.quiver.require_vertex(&mesh_vertex_id(i - 1, j + 1, &sfx))?;
                pres.quiver.add_arrow(up(i, j), here, there)?;
            }
            if inside(i + 1, j) {
                let there = pres.quiver.require_vertex(&mesh_vertex_id(i + 1, j, &sfx))?;
                pres.quiver.add_arrow(down(i, j), here, there)?;
            }
        }
    }
    // Mesh ending at x = (i, j), starting at its translate (i, j-1).
    for i in rlo..=rhi {
        for j in clo..=chi {
            let lower = format!("{}.{}", up(i + 1, j - 1), down(i, j - 1));
            if i == 1 {
                add_windowed(pres, &[(1, lower)])?;
            } else {
                let upper = format!("{}.{}", down(i - 1, j), up(i, j - 1));
                add_windowed(pres, &[(1, upper), (-1, lower)])?;
            }
        }
    }
    Ok(())
}

/// Translate of a mesh vertex.
pub fn mesh_translate(i: i64, j: i64) -> (i64, i64) {
    (i, j - 1)
}

/// Path in a mesh window given as (row, col) steps; convenience for tests.
pub fn mesh_path<F: Field>(pres: &Presentation<F>, words: &[&str]) -> Result<Path, QuiverError> {
    let arrows = words.iter().map(|w| pres.quiver.require_arrow(w)).collect::<Result<Vec<_>, _>>()?;
    Path::from_arrows(&pres.quiver, arrows)
}
