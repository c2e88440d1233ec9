//! Subcommand bodies, generic over the scalar field.

use std::fs;
use std::path::Path;

use pathcat::bimodule::{parse_bimodule, Bimodule};
use pathcat::dsl::{format_presentation, parse_presentation};
use pathcat::module::{format_module, parse_module, Module};
use pathcat::onepoint::{
    mesh_coords, mesh_tilting_module, tilting_check, OnePoint, Probe, Property, PropertyOptions, Samples,
};
use pathcat::pathcat::{PathCatError, PathCategory};
use pathcat::qh::{
    check_heredity_conditions, check_heredity_ideal_direct, delta_filtration_check, parse_filtration, verify_triangular_qh,
    Filtration, TriangularInput,
};
use pathcat::quiver::{enumerate_paths, product_presentation, Quiver};
use pathcat::report::{Check, Status};
use pathcat::trimat::{build_augmented_unchecked, verify_iso_f, verify_tensor_iso, TriMat};
use pathcat::{Field, Presentation};
use rand_chacha::ChaCha8Rng;

use crate::{apply_window, family_windows, CliError, Command, OpeAction};

/// Per-run state: the window override, the windows seen while loading, and
/// the one generator every sampler draws from.
pub struct Ctx {
    pub window: Option<String>,
    pub windows: Vec<String>,
    pub rng: ChaCha8Rng,
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|source| CliError::Io { path: path.display().to_string(), source })
}

fn parse_err(path: &Path, e: impl ToString) -> CliError {
    CliError::Parse { path: path.display().to_string(), message: e.to_string() }
}

fn input(e: impl ToString) -> CliError {
    CliError::Input(e.to_string())
}

fn vertex(q: &Quiver, id: &str) -> Result<usize, CliError> {
    q.require_vertex(id).map_err(input)
}

impl Ctx {
    fn presentation<F: Field>(&mut self, path: &Path) -> Result<Presentation<F>, CliError> {
        let mut text = read(path)?;
        if let Some(w) = &self.window {
            text = apply_window(&text, w);
        }
        let pres = parse_presentation(&text).map_err(|e| parse_err(path, e))?;
        for w in family_windows(&text) {
            self.windows.push(format!("{}: {w}", pres.name()));
        }
        Ok(pres)
    }

    fn module<F: Field>(&self, path: &Path, pres: &Presentation<F>) -> Result<Module<F>, CliError> {
        let m = parse_module(&read(path)?, &pres.quiver).map_err(|e| parse_err(path, e))?;
        m.check_relations(pres).map_err(|e| parse_err(path, e))?;
        Ok(m)
    }

    fn bimodule<F: Field>(&self, path: &Path, tu: &Presentation<F>, tt: &Presentation<F>) -> Result<Bimodule<F>, CliError> {
        parse_bimodule(&read(path)?, tu, tt).map_err(|e| parse_err(path, e))
    }

    fn filtration(&self, path: &Path, q: &Quiver) -> Result<Filtration, CliError> {
        parse_filtration(&read(path)?, q).map_err(|e| parse_err(path, e))
    }
}

pub fn run<F: Field>(ctx: &mut Ctx, cmd: &Command) -> Result<Vec<Check>, CliError> {
    match cmd {
        Command::Hom { pres, a, b } => hom::<F>(ctx, pres, a, b),
        Command::Paths { pres, a, b, max_len } => paths::<F>(ctx, pres, a, b, *max_len),
        Command::Tensor { left, right, verify } => tensor::<F>(ctx, left, right, *verify),
        Command::Augment { t, u, bimod, emit, verify, compare, samples } => {
            augment::<F>(ctx, t, u, bimod, *emit, *verify, compare.as_deref(), *samples)
        }
        Command::Qh { pres, filtration, direct } => qh::<F>(ctx, pres, filtration, *direct),
        Command::Delta { pres, filtration, module } => delta::<F>(ctx, pres, filtration, module),
        Command::Triqh { t, u, bimod, filt_t, filt_u, pairs } => triqh::<F>(ctx, t, u, bimod, filt_t, filt_u, *pairs),
        Command::Ope(args) => ope::<F>(ctx, args),
    }
}

fn boundary_note(pres: &Presentation<impl Field>) -> Option<String> {
    (!pres.boundary.is_empty()).then(|| format!("{} relation(s) cut by the window boundary", pres.boundary.len()))
}

fn hom<F: Field>(ctx: &mut Ctx, path: &Path, a: &str, b: &str) -> Result<Vec<Check>, CliError> {
    let pres = ctx.presentation::<F>(path)?;
    let note = boundary_note(&pres);
    let cat = PathCategory::new(pres);
    let q = cat.quiver();
    let (x, y) = (vertex(q, a)?, vertex(q, b)?);
    let id = format!("hom/{a}/{b}");
    let mut check = match cat.hom(x, y) {
        Ok(h) => {
            let mut w = vec![format!("dim = {}", h.dim())];
            w.extend(h.basis.iter().map(|p| format!("basis {}", p.display(q))));
            Check::with_status(id, Status::Pass, w)
        }
        Err(e @ PathCatError::NoTruncation { .. }) => Check::with_status(id, Status::WindowLimited, vec![e.to_string()]),
        Err(e) => return Err(input(e)),
    };
    if let Some(n) = note {
        check = check.note(n);
    }
    Ok(vec![check])
}

fn paths<F: Field>(ctx: &mut Ctx, path: &Path, a: &str, b: &str, max_len: usize) -> Result<Vec<Check>, CliError> {
    let pres = ctx.presentation::<F>(path)?;
    let q = &pres.quiver;
    let (x, y) = (vertex(q, a)?, vertex(q, b)?);
    let found = enumerate_paths(q, x, y, max_len);
    let mut w = vec![format!("count = {}", found.len())];
    w.extend(found.iter().map(|p| p.display(q).to_string()));
    Ok(vec![Check::with_status(format!("paths/{a}/{b}"), Status::Pass, w)])
}

fn tensor<F: Field>(ctx: &mut Ctx, left: &Path, right: &Path, verify: bool) -> Result<Vec<Check>, CliError> {
    let p1 = ctx.presentation::<F>(left)?;
    let p2 = ctx.presentation::<F>(right)?;
    let (prod, _) = product_presentation(&p1, &p2);
    let summary = format!(
        "{} vertices, {} arrows, {} relations",
        prod.quiver.num_vertices(),
        prod.quiver.num_arrows(),
        prod.relations.len()
    );
    let mut checks = vec![Check::with_status("tensor/product", Status::Pass, vec![summary])];
    if verify {
        checks.push(verify_tensor_iso(&p1, &p2));
    }
    Ok(checks)
}

#[allow(clippy::too_many_arguments)]
fn augment<F: Field>(
    ctx: &mut Ctx,
    t: &Path,
    u: &Path,
    bimod: &Path,
    emit: bool,
    verify: bool,
    compare: Option<&Path>,
    samples: usize,
) -> Result<Vec<Check>, CliError> {
    let tt = ctx.presentation::<F>(t)?;
    let tu = ctx.presentation::<F>(u)?;
    let m = ctx.bimodule(bimod, &tu, &tt)?;
    let violations = m.validate(&tu, &tt);
    let mut checks = vec![Check::from_witnesses("bimodule/valid", violations.into_iter().map(|v| v.witness).collect())];
    let aug = build_augmented_unchecked(&tt, &tu, &m).map_err(input)?;
    let aq = &aug.presentation.quiver;
    let arrows = aug
        .dictionary(&m)
        .into_iter()
        .map(|(label, id)| {
            let a = aq.arrow(aq.arrow_by_id(&id).expect("dictionary arrow exists"));
            format!("{label} = {id} : {} -> {}", aq.vertex_id(a.source), aq.vertex_id(a.target))
        })
        .collect();
    checks.push(Check::with_status("augment/arrows", Status::Pass, arrows));
    checks.push(Check::with_status("augment/mu", Status::Pass, aug.mu_display()));
    if emit {
        let text = format_presentation(&aug.presentation);
        checks.push(Check::with_status("augment/emit", Status::Pass, text.lines().map(str::to_string).collect()));
    }
    if verify || compare.is_some() {
        let other = compare.map(|p| ctx.presentation::<F>(p)).transpose()?;
        let (ct, cu) = (PathCategory::new(tt.clone()), PathCategory::new(tu.clone()));
        let tri = TriMat::new(&ct, &cu, &m);
        checks.extend(verify_iso_f(&tri, &aug, &aug.objects(), samples, &mut ctx.rng, other.as_ref()));
    }
    Ok(checks)
}

fn qh<F: Field>(ctx: &mut Ctx, path: &Path, filt: &Path, direct: bool) -> Result<Vec<Check>, CliError> {
    let pres = ctx.presentation::<F>(path)?;
    let f = ctx.filtration(filt, &pres.quiver)?;
    let cat = PathCategory::new(pres);
    let mut checks = check_heredity_conditions(&cat, &f);
    if direct {
        for j in 1..=f.levels() {
            checks.extend(check_heredity_ideal_direct(&cat, &f, j));
        }
    }
    Ok(checks)
}

fn delta<F: Field>(ctx: &mut Ctx, path: &Path, filt: &Path, module: &Path) -> Result<Vec<Check>, CliError> {
    let pres = ctx.presentation::<F>(path)?;
    let f = ctx.filtration(filt, &pres.quiver)?;
    let m = ctx.module(module, &pres)?;
    let cat = PathCategory::new(pres);
    let verdict = delta_filtration_check(&cat, &f, &m).map_err(input)?;
    let status = if verdict.filtered { Status::Pass } else { Status::Fail };
    let mut w = verdict.describe(cat.quiver());
    if !verdict.exhausted {
        w.push("trace filtration does not exhaust the module".into());
    }
    w.push(format!("length = {}", verdict.length()));
    Ok(vec![Check::with_status("delta/filtered", status, w)])
}

fn triqh<F: Field>(ctx: &mut Ctx, t: &Path, u: &Path, bimod: &Path, ft: &Path, fu: &Path, pairs: usize) -> Result<Vec<Check>, CliError> {
    let tt = ctx.presentation::<F>(t)?;
    let tu = ctx.presentation::<F>(u)?;
    let m = ctx.bimodule(bimod, &tu, &tt)?;
    let filt_t = ctx.filtration(ft, &tt.quiver)?;
    let filt_u = ctx.filtration(fu, &tu.quiver)?;
    let input = TriangularInput { tt: &tt, tu: &tu, m: &m, filt_t: &filt_t, filt_u: &filt_u };
    Ok(verify_triangular_qh(&input, pairs, &mut ctx.rng))
}

fn ope<F: Field>(ctx: &mut Ctx, args: &crate::OpeArgs) -> Result<Vec<Check>, CliError> {
    let pres = ctx.presentation::<F>(&args.pres)?;
    let op = OnePoint::split(pres, &args.star).map_err(input)?;
    let need_module = || args.module.as_deref().ok_or_else(|| CliError::Usage(format!("`{}` needs --module", args.action)));
    let opts = PropertyOptions { ext_degree: args.ext_degree, pd_cap: args.pd_cap, sequences: args.sequences };
    let module_lines = |m: &Module<F>, q: &Quiver| format_module(m, q).lines().map(str::to_string).collect::<Vec<_>>();
    match &args.action {
        OpeAction::Restrict => {
            let x = ctx.module(need_module()?, op.lambda.presentation())?;
            Ok(vec![Check::with_status("ope/restrict", Status::Pass, module_lines(&op.restrict(&x), op.u_quiver()))])
        }
        OpeAction::Extend => {
            let g = ctx.module(need_module()?, op.u.presentation())?;
            Ok(vec![Check::with_status("ope/extend", Status::Pass, module_lines(&op.extend(&g), op.lambda_quiver()))])
        }
        OpeAction::ExtSeq => {
            let g = ctx.module(need_module()?, op.u.presentation())?;
            let seq = op.extension_sequence(&g).map_err(input)?;
            let mut w = seq.problems.clone();
            w.push(format!("e_G = {}, dim Ext^1(S,G) = {}, dim Hom(P_0,G) = {}", seq.e_g, seq.ext_dim, seq.hom_p0_dim));
            let status = if seq.problems.is_empty() { Status::Pass } else { Status::Fail };
            Ok(vec![Check::with_status("ope/ext-seq", status, w)])
        }
        OpeAction::TorsionSeq => {
            let x = ctx.module(need_module()?, op.lambda.presentation())?;
            let seq = op.torsion_sequence(&x).map_err(input)?;
            let mut w = seq.problems.clone();
            w.push(format!("r_X = {}", seq.r_x));
            let status = if seq.problems.is_empty() { Status::Pass } else { Status::Fail };
            Ok(vec![Check::with_status("ope/torsion-seq", status, w)])
        }
        OpeAction::Verify(props) => {
            let samples = Samples {
                u_modules: op.sample_u_modules(args.samples, &mut ctx.rng).map_err(input)?,
                lambda_modules: op.sample_lambda_modules(args.samples, &mut ctx.rng).map_err(input)?,
            };
            let props: Vec<Property> = props.map_or_else(|| Property::ALL.to_vec(), |p| vec![p]);
            Ok(props.into_iter().map(|p| op.verify_property(p, &samples, &opts, &mut ctx.rng)).collect())
        }
        OpeAction::Tilting => tilting(ctx, &op, args.pd_cap),
    }
}

/// The family `E T(r,s)` for every `(r,s)` of the mesh window together with
/// the simple at the star, probed at every vertex with the coresolution
/// suggested by the mesh shape.
fn tilting<F: Field>(ctx: &mut Ctx, op: &OnePoint<F>, pd_cap: usize) -> Result<Vec<Check>, CliError> {
    let uq = op.u_quiver();
    let coords: Vec<(i64, i64)> = uq.vertex_ids().iter().filter_map(|id| mesh_coords(id)).collect();
    if coords.is_empty() {
        return Err(CliError::Usage("tilting needs a mesh window".into()));
    }
    let mut family: Vec<(String, Module<F>)> = Vec::new();
    let mut index = std::collections::HashMap::new();
    for &(r, s) in &coords {
        let t = mesh_tilting_module(uq, r, s).map_err(input)?;
        index.insert((r, s), family.len());
        family.push((format!("T({r},{s})"), op.extend(&t)));
    }
    let s_index = family.len();
    family.push(("S".into(), op.simple_star()));
    let lq = op.lambda_quiver();
    let mut probes = Vec::new();
    for v in 0..lq.num_vertices() {
        let hint = if v == op.star {
            match (index.get(&(1, 1)), index.get(&(2, 0))) {
                (Some(&a), Some(&b)) => Some((vec![a, s_index], vec![b])),
                _ => None,
            }
        } else {
            mesh_coords(lq.vertex_id(v)).and_then(|(r, s)| match (index.get(&(1, r + s - 1)), index.get(&(r + 1, s - 1))) {
                (Some(&a), Some(&b)) => Some((vec![a], vec![b])),
                (Some(&a), None) => Some((vec![a], vec![])),
                _ => None,
            })
        };
        probes.push(Probe { vertex: v, hint });
    }
    Ok(tilting_check(&op.lambda, &family, &probes, pd_cap, &mut ctx.rng))
}
