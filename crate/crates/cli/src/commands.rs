use std::str::FromStr;

use densq_core::cohomology::{
    circle_vs_line, circle_vs_line_default, cocycle_defect_formal, exceptional_locus_relative, h1_finite_with, h1_relative,
    h1_relative_formal, h1_vect_diff_formal, h1_vect_diff_with, never_cocycle_report, poisson_d_cochain, remark_cocycles, render_scalar,
    CohomReport, ExceptionalRow, NeverCocycleReport, Truncation,
};
use densq_core::corealg::{fmt_rat, Field};
use densq_core::diffops::{grozman, grozman_with_middle_sign, invariance_defect, poisson, product, transvectant, BilinOp};
use densq_core::invariance::{
    bilinear_keys, classify_point, default_grid, invariance_system, solve_invariants, to_scalar, ClassRow, CoeffMode, Exceptional,
};
use densq_core::jets::{JetKey, Slot};
use densq_core::liealg::{AlgebraName, Subalgebra};
use densq_core::quantization::{
    check_equivariance, full_quant_exists, render_factors, solve_symbol_map, symbol_map_order1, symbol_map_order2, EquivarianceReport,
    FullQuantReport, QuantMap,
};
use densq_core::{CoreError, Mode, Rat, Scalar};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::args::{AlgebraArgs, CochainArg, Command, FiniteAlgebraArgs, PairArgs, RatList, SweepJob, TruncArg, Weight};
use crate::table::Table;
use crate::CliError;

/// Result of one command: the JSON payload, its table rendering and an exit
/// code for partially failed sweeps.
pub struct Outcome {
    pub result: Value,
    pub text: String,
    pub code: i32,
}

impl Outcome {
    fn ok<T: Serialize>(payload: &T, text: String) -> Result<Outcome, CliError> {
        let result = serde_json::to_value(payload).map_err(|e| CliError::Core(CoreError::Internal(e.to_string())))?;
        Ok(Outcome { result, text, code: 0 })
    }
}

/// Settings shared by every command of a job.
pub struct Context {
    pub trunc: Option<TruncArg>,
}

impl Context {
    fn trunc_or(&self, default: Truncation) -> Truncation {
        self.trunc.map_or(default, |t| Truncation::new(t.order, t.degree, t.freq))
    }
}

fn algebra_name(name: &str) -> Result<AlgebraName, CliError> {
    AlgebraName::from_str(name).map_err(|e| CliError::Usage(e.to_string()))
}

fn algebra(name: &str, mode: Mode, scale: i64) -> Result<Subalgebra, CliError> {
    let n = algebra_name(name)?;
    Ok(Subalgebra::with_scale(n, mode, scale)?)
}

fn finite_algebra(a: &FiniteAlgebraArgs) -> Result<Subalgebra, CliError> {
    let g = algebra(&a.algebra, a.mode.into(), a.scale)?;
    if g.is_formal() {
        return Err(CliError::Usage("this command needs a finite-dimensional algebra".into()));
    }
    Ok(g)
}

fn value(w: &Weight, what: &str) -> Result<Rat, CliError> {
    match w {
        Weight::Value(r) => Ok(r.clone()),
        Weight::Param => Err(CliError::Usage(format!("{what} must be an exact rational here"))),
    }
}

/// `(λ, μ)` as rationals.
fn rational_pair(p: &PairArgs) -> Result<(Rat, Rat), CliError> {
    let l = value(&p.lambda, "--lambda")?;
    match (&p.mu, &p.delta) {
        (Some(m), None) => Ok((l, value(m, "--mu")?)),
        (None, Some(d)) => {
            let d = value(d, "--delta")?;
            Ok((l.clone(), l + d))
        }
        _ => Err(CliError::Usage("exactly one of --mu and --delta is required".into())),
    }
}

fn scalar(w: &Weight) -> Scalar {
    match w {
        Weight::Value(r) => to_scalar(r),
        Weight::Param => Scalar::param(),
    }
}

/// Name of the formal parameter among labelled weights; fails when more
/// than one weight is formal.
fn param_name(ws: &[(&str, Option<&Weight>)]) -> Result<Option<String>, CliError> {
    let names: Vec<&str> = ws.iter().filter(|(_, w)| matches!(w, Some(Weight::Param))).map(|(n, _)| *n).collect();
    match names.len() {
        0 => Ok(None),
        1 => Ok(Some(names[0].to_string())),
        _ => Err(CliError::Core(CoreError::MultipleParams)),
    }
}

/// `(λ, μ)` as scalars together with the name of the formal weight.
fn scalar_pair(p: &PairArgs) -> Result<(Scalar, Scalar, Option<String>), CliError> {
    let var = param_name(&[("λ", Some(&p.lambda)), ("μ", p.mu.as_ref()), ("δ", p.delta.as_ref())])?;
    let l = scalar(&p.lambda);
    let m = match (&p.mu, &p.delta) {
        (Some(m), None) => scalar(m),
        (None, Some(d)) => l.clone() + scalar(d),
        _ => return Err(CliError::Usage("exactly one of --mu and --delta is required".into())),
    };
    Ok((l, m, var))
}

fn show(s: &Scalar, var: &Option<String>) -> String {
    render_scalar(s, var.as_deref().unwrap_or("t"))
}

fn jet_term(i: usize, j: usize) -> String {
    JetKey::EMPTY.with(Slot::Phi, i).with(Slot::Psi, j).to_string()
}

/// Constant-coefficient operator `Σ c_{i,j} φ⁽ⁱ⁾ψ⁽ʲ⁾` with the formal
/// parameter printed as `var`.
fn render_terms(terms: &[((usize, usize), Scalar)], var: &Option<String>) -> String {
    let mut out = String::new();
    for ((i, j), c) in terms.iter().filter(|(_, c)| *c != Scalar::from_i64(0)) {
        let mut cs = show(c, var);
        let compound = cs.contains(' ') || cs[1..].contains(['+', '-']);
        let neg = !compound && cs.starts_with('-');
        if neg {
            cs.remove(0);
        }
        match (out.is_empty(), neg) {
            (true, true) => out.push('-'),
            (true, false) => {}
            (false, true) => out.push_str(" - "),
            (false, false) => out.push_str(" + "),
        }
        let term = jet_term(*i, *j);
        if cs == "1" {
            out.push_str(&term);
        } else if compound {
            out.push_str(&format!("({cs})·{term}"));
        } else {
            out.push_str(&format!("{cs}·{term}"));
        }
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

fn render_op(b: &BilinOp<Scalar>, var: &Option<String>) -> String {
    let terms: Vec<((usize, usize), Scalar)> =
        b.coeffs().keys().map(|&(i, j)| ((i, j), b.const_coeff(i, j).unwrap_or_else(|| Scalar::from_i64(0)))).collect();
    render_terms(&terms, var)
}

fn exceptional_rows(es: &[Exceptional], var: &Option<String>) -> Vec<ExceptionalRow> {
    let v = var.as_deref().unwrap_or("t");
    es.iter().map(|e| ExceptionalRow { factor: e.render(v), root: e.root.as_ref().map(fmt_rat), dim: e.dim, jump: e.jump }).collect()
}

fn kv(rows: &[(&str, String)]) -> String {
    let mut t = Table::new(&["field", "value"]);
    for (k, v) in rows {
        t.push(vec![k.to_string(), v.clone()]);
    }
    t.render()
}

fn opt<T: ToString>(v: &Option<T>) -> String {
    v.as_ref().map_or("-".into(), |x| x.to_string())
}

pub fn execute(cmd: &Command, ctx: &Context) -> Result<Outcome, CliError> {
    match cmd {
        Command::Catalog { mode, max_n, scale } => catalog((*mode).into(), *max_n, *scale),
        Command::Classify { alg, order_max, gamma, lambda } => classify(alg, *order_max, gamma.as_ref(), lambda.as_ref()),
        Command::Invariants { alg, order, gamma, lambda, mu } => invariants(alg, *order, gamma, lambda, mu),
        Command::Transvectant { order, gamma, lambda, mode } => transvectant_cmd(*order, gamma, lambda, (*mode).into()),
        Command::Grozman { mode } => grozman_cmd((*mode).into()),
        Command::CocycleCheck { cochain, lambda, mode } => cocycle_check(*cochain, lambda, (*mode).into()),
        Command::Cohomology { alg, pair, no_stabilize, extra } => cohomology(alg, pair, !*no_stabilize, *extra, ctx),
        Command::Relative { alg, pair, order } => relative(alg, pair, *order),
        Command::CircleCheck { lambda } => circle_check(lambda, ctx),
        Command::Quantize { order, pair, mode, check } => quantize(*order, pair, (*mode).into(), check.as_deref()),
        Command::SolveQuant { alg, order, pair } => solve_quant(alg, *order, pair),
        Command::FullQuant { alg, pair } => full_quant(alg, pair),
        Command::Sweep { .. } => sweep(cmd, ctx),
    }
}

#[derive(Serialize, Deserialize)]
struct CatalogRow {
    name: String,
    mode: String,
    dim: usize,
    generators: Vec<String>,
    jacobi: bool,
    killing_signature: Option<(usize, usize, usize)>,
    translation: bool,
}

fn catalog(mode: Mode, max_n: u32, scale: i64) -> Result<Outcome, CliError> {
    let mut names = vec![AlgebraName::G0, AlgebraName::A1, AlgebraName::H0];
    names.extend((0..=max_n).map(AlgebraName::L));
    names.extend([AlgebraName::K1, AlgebraName::K2]);
    let rows: Vec<CatalogRow> = names
        .into_iter()
        .filter_map(|n| Subalgebra::with_scale(n, mode, scale).ok())
        .map(|g| CatalogRow {
            name: g.name().to_string(),
            mode: mode.to_string(),
            dim: g.dim(),
            generators: g.labels().to_vec(),
            jacobi: g.check_jacobi(),
            killing_signature: g.killing_signature(),
            translation: g.contains_translation(),
        })
        .collect();
    let mut t = Table::new(&["algebra", "dim", "generators", "jacobi", "killing (+,-,0)"]);
    for r in &rows {
        let sig = r.killing_signature.map_or("-".into(), |(p, n, z)| format!("({p},{n},{z})"));
        t.push(vec![r.name.clone(), r.dim.to_string(), r.generators.join(", "), r.jacobi.to_string(), sig]);
    }
    Outcome::ok(&rows, t.render())
}

fn classify(alg: &AlgebraArgs, order_max: usize, gamma: Option<&Weight>, lambda: Option<&Weight>) -> Result<Outcome, CliError> {
    let g = algebra(&alg.algebra, alg.mode.into(), alg.scale)?;
    let grid = match (gamma, lambda) {
        (Some(a), Some(b)) => vec![(value(a, "--gamma")?, value(b, "--lambda")?)],
        _ => default_grid(),
    };
    let per_point: Vec<Vec<ClassRow>> = grid.par_iter().map(|(a, b)| classify_point(&g, order_max, a, b)).collect();
    let rows: Vec<ClassRow> = per_point.into_iter().flatten().collect();
    let mut t = Table::new(&["order", "γ", "λ", "μ", "dim", "named", "unnamed", "basis"]);
    for r in &rows {
        t.push(vec![
            r.order.to_string(),
            r.gamma.clone(),
            r.lambda.clone(),
            r.mu.clone(),
            r.new_dim.to_string(),
            r.named.join(", "),
            r.unnamed.to_string(),
            r.basis.join("; "),
        ]);
    }
    Outcome::ok(&rows, t.render())
}

#[derive(Serialize, Deserialize)]
struct InvariantsResult {
    algebra: String,
    order: usize,
    parameter: Option<String>,
    generic_dim: usize,
    columns: Vec<String>,
    basis: Vec<String>,
    exceptional: Vec<ExceptionalRow>,
}

fn invariants(alg: &AlgebraArgs, k: usize, gamma: &Weight, lambda: &Weight, mu: &Weight) -> Result<Outcome, CliError> {
    let var = param_name(&[("γ", Some(gamma)), ("λ", Some(lambda)), ("μ", Some(mu))])?;
    let g = algebra(&alg.algebra, alg.mode.into(), alg.scale)?;
    let (gs, ls, ms) = (scalar(gamma), scalar(lambda), scalar(mu));
    let m = invariance_system(k, &gs, &ls, &ms, &g, &CoeffMode::Constants);
    let rep = solve_invariants(&m);
    let keys = bilinear_keys(k);
    let basis: Vec<String> =
        rep.basis.iter().map(|v| render_terms(&keys.iter().cloned().zip(v.iter().cloned()).collect::<Vec<_>>(), &var)).collect();
    let res = InvariantsResult {
        algebra: g.name().to_string(),
        order: k,
        parameter: var.clone(),
        generic_dim: rep.generic_dim,
        columns: rep.columns.clone(),
        basis,
        exceptional: exceptional_rows(&rep.exceptional, &var),
    };
    let mut text = kv(&[("algebra", res.algebra.clone()), ("order", k.to_string()), ("generic dim", res.generic_dim.to_string())]);
    let mut t = Table::new(&["#", "operator"]);
    for (i, b) in res.basis.iter().enumerate() {
        t.push(vec![i.to_string(), b.clone()]);
    }
    text.push_str(&t.render());
    text.push_str(&exceptional_table(&res.exceptional));
    Outcome::ok(&res, text)
}

fn exceptional_table(rows: &[ExceptionalRow]) -> String {
    if rows.is_empty() {
        return String::new();
    }
    let mut t = Table::new(&["factor", "root", "dim", "jump"]);
    for e in rows {
        t.push(vec![e.factor.clone(), opt(&e.root), opt(&e.dim), e.jump.to_string()]);
    }
    t.render()
}

#[derive(Serialize, Deserialize)]
struct TransvectantResult {
    order: usize,
    gamma: String,
    lambda: String,
    mu: String,
    operator: String,
    resonant: bool,
    l0_invariant: Option<bool>,
    vect_invariant: bool,
    equals_product: Option<bool>,
    proportional_to_poisson: Option<bool>,
}

fn invariant_under(g: &Subalgebra, b: &BilinOp<Scalar>) -> Result<bool, CliError> {
    for i in 0..g.dim() {
        if !invariance_defect(Some(&g.generator::<Scalar>(i)), b)?.is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}

fn transvectant_cmd(k: usize, gamma: &Weight, lambda: &Weight, mode: Mode) -> Result<Outcome, CliError> {
    let var = param_name(&[("γ", Some(gamma)), ("λ", Some(lambda))])?;
    let (gs, ls) = (scalar(gamma), scalar(lambda));
    let (b, resonant) = transvectant(k, gs.clone(), ls.clone(), mode);
    let l0_invariant = match Subalgebra::new(AlgebraName::L(0), mode) {
        Ok(l0) => Some(invariant_under(&l0, &b)?),
        Err(_) => None,
    };
    let res = TransvectantResult {
        order: k,
        gamma: show(&gs, &var),
        lambda: show(&ls, &var),
        mu: show(&b.mu, &var),
        operator: render_op(&b, &var),
        resonant,
        l0_invariant,
        vect_invariant: invariance_defect(None, &b)?.is_zero(),
        equals_product: (k == 0).then(|| b == product(gs.clone(), ls.clone(), mode)),
        proportional_to_poisson: (k == 1).then(|| b.proportional_to(&poisson(gs.clone(), ls.clone(), mode))),
    };
    let text = kv(&[
        ("operator", res.operator.clone()),
        ("weights", format!("F_{} ⊗ F_{} → F_{}", res.gamma, res.lambda, res.mu)),
        ("resonant", res.resonant.to_string()),
        ("l_0 invariant", opt(&res.l0_invariant)),
        ("vect invariant", res.vect_invariant.to_string()),
        ("equals product", opt(&res.equals_product)),
        ("∝ Poisson", opt(&res.proportional_to_poisson)),
    ]);
    Outcome::ok(&res, text)
}

#[derive(Serialize, Deserialize)]
struct GrozmanResult {
    operator: String,
    vect_invariant: bool,
    opposite_middle_sign: String,
    opposite_invariant: bool,
    opposite_defect: String,
}

fn grozman_cmd(mode: Mode) -> Result<Outcome, CliError> {
    let b = grozman::<Scalar>(mode);
    let flipped = grozman_with_middle_sign::<Scalar>(mode, -1);
    let defect = invariance_defect(None, &flipped)?;
    let res = GrozmanResult {
        operator: b.to_string(),
        vect_invariant: invariance_defect(None, &b)?.is_zero(),
        opposite_middle_sign: flipped.to_string(),
        opposite_invariant: defect.is_zero(),
        opposite_defect: defect.to_string(),
    };
    let text = kv(&[
        ("operator", res.operator.clone()),
        ("vect invariant", res.vect_invariant.to_string()),
        ("opposite sign", res.opposite_middle_sign.clone()),
        ("opposite invariant", res.opposite_invariant.to_string()),
        ("opposite defect", res.opposite_defect.clone()),
    ]);
    Outcome::ok(&res, text)
}

#[derive(Serialize, Deserialize)]
struct CocycleResult {
    cochain: String,
    operator: String,
    defect: String,
    cocycle: bool,
    never_cocycle: Option<NeverCocycleReport>,
}

fn cocycle_check(which: CochainArg, lambda: &Weight, mode: Mode) -> Result<Outcome, CliError> {
    let var = param_name(&[("λ", Some(lambda))])?;
    let l = scalar(lambda);
    let (name, c, report) = match which {
        CochainArg::C1 => ("c1", remark_cocycles(&l, mode).0, None),
        CochainArg::C2 => ("c2", remark_cocycles(&l, mode).1, None),
        CochainArg::PoissonD => ("poisson-d", poisson_d_cochain::<Scalar>(mode), Some(never_cocycle_report(mode))),
    };
    let defect = cocycle_defect_formal(&c);
    let res = CocycleResult {
        cochain: name.into(),
        operator: render_cochain_op(&c, &var),
        defect: defect.to_string(),
        cocycle: defect.is_zero(),
        never_cocycle: report,
    };
    let mut rows = vec![
        ("cochain", res.cochain.clone()),
        ("operator", res.operator.clone()),
        ("cocycle", res.cocycle.to_string()),
        ("defect", res.defect.clone()),
    ];
    if let Some(r) = &res.never_cocycle {
        rows.push(("never a cocycle", r.never_cocycle.to_string()));
        rows.push(("conditions", r.conditions.join("; ")));
        rows.push(("residual", r.residual.clone()));
    }
    Outcome::ok(&res, kv(&rows))
}

/// A cochain `X ↦ Σ c_{i,j} X⁽ⁱ⁾ψ⁽ʲ⁾` printed in `X` and `ψ`.
fn render_cochain_op(c: &BilinOp<Scalar>, var: &Option<String>) -> String {
    render_op(c, var).replace('φ', "X")
}

fn cohom_text(r: &CohomReport) -> String {
    let mut t = Table::new(&["truncation", "cocycles", "coboundaries", "dim"]);
    for l in &r.truncations {
        t.push(vec![l.trunc.to_string(), l.cocycles.to_string(), l.coboundaries.to_string(), l.dim.to_string()]);
    }
    let mut text = kv(&[
        ("complex", r.complex.clone()),
        ("weights", format!("λ={} μ={}", r.lambda, r.mu)),
        ("stabilized dim", opt(&r.stabilized_dim)),
    ]);
    text.push_str(&t.render());
    if !r.representatives.is_empty() {
        let mut rt = Table::new(&["#", "representative"]);
        for (i, rep) in r.representatives.iter().enumerate() {
            rt.push(vec![i.to_string(), rep.pretty.clone()]);
        }
        text.push_str(&rt.render());
    }
    text.push_str(&exceptional_table(&r.exceptional));
    text
}

/// Default window for the differential complex of Vect.
fn vect_window(delta: &Rat) -> Truncation {
    let d = Truncation::for_delta(delta);
    Truncation::new(d.order, 2, 2)
}

/// Default window for a finite algebra.
fn finite_window(g: &Subalgebra, delta: &Rat) -> Truncation {
    let n = Truncation::for_delta(delta).order;
    match (g.name(), g.mode()) {
        (AlgebraName::K1 | AlgebraName::K2 | AlgebraName::H0, Mode::Line) => Truncation::new(n, 1, 1),
        (AlgebraName::K1 | AlgebraName::K2 | AlgebraName::H0, Mode::Circle) => Truncation::new(n, 0, 2),
        _ => Truncation::new(n, 2, 0),
    }
}

fn cohomology_report(g: &Subalgebra, pair: &PairArgs, stabilize: bool, extra: usize, ctx: &Context) -> Result<CohomReport, CliError> {
    let var = param_name(&[("λ", Some(&pair.lambda)), ("μ", pair.mu.as_ref()), ("δ", pair.delta.as_ref())])?;
    if var.is_some() {
        if !g.is_formal() || var.as_deref() != Some("λ") {
            return Err(CliError::Usage("a formal weight is supported for --algebra vect with --lambda param --delta d".into()));
        }
        let d = pair.delta.as_ref().ok_or_else(|| CliError::Usage("--lambda param needs --delta".into()))?;
        let d = value(d, "--delta")?;
        let t = ctx.trunc_or(vect_window(&d));
        return Ok(h1_vect_diff_formal(&d, g.mode(), t).report());
    }
    let (l, m) = rational_pair(pair)?;
    let d = m.clone() - l.clone();
    if g.is_formal() {
        let t = ctx.trunc_or(vect_window(&d));
        Ok(h1_vect_diff_with(&l, &d, g.mode(), t, stabilize, extra).report())
    } else {
        let t = ctx.trunc_or(finite_window(g, &d));
        Ok(h1_finite_with(g, &l, &m, t, stabilize, extra)?.report())
    }
}

fn cohomology(alg: &AlgebraArgs, pair: &PairArgs, stabilize: bool, extra: usize, ctx: &Context) -> Result<Outcome, CliError> {
    let g = algebra(&alg.algebra, alg.mode.into(), alg.scale)?;
    let r = cohomology_report(&g, pair, stabilize, extra, ctx)?;
    Outcome::ok(&r, cohom_text(&r))
}

fn relative_report(g: &Subalgebra, pair: &PairArgs, order: Option<usize>) -> Result<CohomReport, CliError> {
    let var = param_name(&[("λ", Some(&pair.lambda)), ("μ", pair.mu.as_ref()), ("δ", pair.delta.as_ref())])?;
    if var.is_some() {
        if var.as_deref() != Some("λ") {
            return Err(CliError::Usage("only --lambda may be formal for relative cohomology".into()));
        }
        let d = pair.delta.as_ref().ok_or_else(|| CliError::Usage("--lambda param needs --delta".into()))?;
        let d = value(d, "--delta")?;
        let mut r = h1_relative_formal(g, &d, order)?.report();
        r.lambda = "λ".into();
        r.mu = render_scalar(&(Scalar::param() + to_scalar(&d)), "λ");
        r.exceptional = exceptional_locus_relative(g, &d)?.iter().map(ExceptionalRow::from).collect();
        return Ok(r);
    }
    let (l, m) = rational_pair(pair)?;
    Ok(h1_relative(g, &l, &m, order)?.report())
}

fn relative(alg: &FiniteAlgebraArgs, pair: &PairArgs, order: Option<usize>) -> Result<Outcome, CliError> {
    let g = finite_algebra(alg)?;
    let r = relative_report(&g, pair, order)?;
    Outcome::ok(&r, cohom_text(&r))
}

fn circle_check(lambda: &Weight, ctx: &Context) -> Result<Outcome, CliError> {
    let l = value(lambda, "--lambda")?;
    let r = match ctx.trunc {
        Some(t) => circle_vs_line(&l, Truncation::new(t.order, t.degree.max(1), 0), Truncation::new(t.order, 0, t.freq)),
        None => circle_vs_line_default(&l),
    };
    let mut t = Table::new(&["mode", "window", "c1 cocycle", "c2 cocycle", "c1 = δA", "c2 = δA", "class dim"]);
    for m in [&r.line, &r.circle] {
        t.push(vec![
            m.mode.to_string(),
            m.window.to_string(),
            m.c1_cocycle.to_string(),
            m.c2_cocycle.to_string(),
            opt(&m.c1_primitive),
            opt(&m.c2_primitive),
            m.class_dim.to_string(),
        ]);
    }
    Outcome::ok(&r, t.render())
}

#[derive(Serialize, Deserialize)]
struct QuantizeResult {
    order: usize,
    lambda: String,
    mu: String,
    source: String,
    coefficients: Vec<String>,
    map: String,
    equivariance: Option<EquivarianceReport>,
}

fn quantize(k: usize, pair: &PairArgs, mode: Mode, check: Option<&str>) -> Result<Outcome, CliError> {
    let (l, m, var) = scalar_pair(pair)?;
    let delta = m.clone() - l.clone();
    let q: QuantMap<Scalar> = match k {
        1 => symbol_map_order1(&l, &delta, mode)?,
        2 => symbol_map_order2(&l, &delta, mode)?,
        _ => return Err(CliError::Usage(format!("explicit symbol maps exist for orders 1 and 2, got {k}"))),
    };
    let equivariance = match check {
        Some(name) => Some(check_equivariance(&q, &algebra(name, mode, 1)?)?),
        None => None,
    };
    let b = q.as_bilinear();
    let res = QuantizeResult {
        order: k,
        lambda: show(&l, &var),
        mu: show(&m, &var),
        source: show(&q.source(), &var),
        coefficients: q.beta.iter().map(|c| show(c, &var)).collect(),
        map: render_op(&b, &var).replace('φ', "a").replace('ψ', "∂"),
        equivariance,
    };
    let mut rows = vec![
        ("coefficients", format!("({})", res.coefficients.join(", "))),
        ("map", res.map.clone()),
        ("weights", format!("F_{} → D(F_{}, F_{})", res.source, res.lambda, res.mu)),
    ];
    if let Some(e) = &res.equivariance {
        rows.push(("algebra", e.algebra.clone()));
        rows.push(("equivariant", e.equivariant.to_string()));
    }
    Outcome::ok(&res, kv(&rows))
}

#[derive(Serialize, Deserialize)]
struct SolveQuantResult {
    algebra: String,
    order: usize,
    lambda: String,
    mu: String,
    parameter: Option<String>,
    generic_dim: usize,
    basis: Vec<Vec<String>>,
    normalized: Option<Vec<String>>,
    poles: Vec<String>,
    exceptional: Vec<ExceptionalRow>,
    obstruction: Option<String>,
}

fn solve_quant_result(g: &Subalgebra, k: usize, pair: &PairArgs) -> Result<SolveQuantResult, CliError> {
    let (l, m, var) = scalar_pair(pair)?;
    let s = solve_symbol_map(k, &l, &m, g)?;
    let v = var.as_deref().unwrap_or("t");
    let obstruction = if s.report.generic_dim == 0 && k >= 1 {
        let q = QuantMap { order: k, lambda: l.clone(), mu: m.clone(), beta: first_unit(k), mode: g.mode() };
        let e = check_equivariance(&q, g)?;
        e.defects.first().map(|(gen, d)| format!("{gen}: {d}"))
    } else {
        None
    };
    Ok(SolveQuantResult {
        algebra: g.name().to_string(),
        order: k,
        lambda: show(&l, &var),
        mu: show(&m, &var),
        parameter: var.clone(),
        generic_dim: s.report.generic_dim,
        basis: s.report.basis.iter().map(|b| b.iter().map(|c| show(c, &var)).collect()).collect(),
        normalized: s.normalized.as_ref().map(|n| n.iter().map(|c| show(c, &var)).collect()),
        poles: render_factors(&s.poles, v),
        exceptional: exceptional_rows(&s.report.exceptional, &var),
        obstruction,
    })
}

/// `β = (1, 0, …, 0)`: the bare principal part, whose defect witnesses the
/// obstruction when no equivariant map exists.
fn first_unit(k: usize) -> Vec<Scalar> {
    (0..=k).map(|j| Scalar::from_i64((j == 0) as i64)).collect()
}

fn solve_quant(alg: &AlgebraArgs, k: usize, pair: &PairArgs) -> Result<Outcome, CliError> {
    let g = algebra(&alg.algebra, alg.mode.into(), alg.scale)?;
    let res = solve_quant_result(&g, k, pair)?;
    let mut text = kv(&[
        ("algebra", res.algebra.clone()),
        ("order", res.order.to_string()),
        ("generic dim", res.generic_dim.to_string()),
        ("normalized", res.normalized.as_ref().map_or("-".into(), |n| format!("({})", n.join(", ")))),
        ("poles", res.poles.join(", ")),
        ("obstruction", opt(&res.obstruction)),
    ]);
    text.push_str(&exceptional_table(&res.exceptional));
    Outcome::ok(&res, text)
}

fn full_quant(alg: &FiniteAlgebraArgs, pair: &PairArgs) -> Result<Outcome, CliError> {
    let g = finite_algebra(alg)?;
    let (l, m) = rational_pair(pair)?;
    let r = full_quant_exists(&l, &m, &g)?;
    Outcome::ok(&r, full_quant_text(&r))
}

fn full_quant_text(r: &FullQuantReport) -> String {
    let mut text = kv(&[
        ("algebra", r.algebra.clone()),
        ("weights", format!("λ={} μ={}", r.lambda, r.mu)),
        ("exists", r.exists.to_string()),
        ("vect exists", r.vect_exists.to_string()),
        ("spaces equal", r.spaces_equal.to_string()),
        ("predicate", r.predicate.to_string()),
        ("flagged", r.flagged.to_string()),
        ("obstruction", opt(&r.obstruction)),
    ]);
    let mut t = Table::new(&["order", "source", "g dim", "vect dim", "equal", "map"]);
    for b in &r.blocks {
        t.push(vec![b.order.to_string(), b.source.clone(), b.g_dim.to_string(), b.vect_dim.to_string(), b.equal.to_string(), opt(&b.map)]);
    }
    text.push_str(&t.render());
    if r.flagged {
        text.push_str("FLAGGED: solver and branch predicate disagree\n");
    }
    text
}

/// One grid cell of a sweep.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepRow {
    pub lambda: String,
    pub mu: String,
    pub delta: String,
    pub dim: Option<usize>,
    pub detail: String,
    pub error: Option<String>,
}

#[derive(Serialize, Deserialize)]
struct SweepResult {
    job: String,
    algebra: String,
    rows: Vec<SweepRow>,
}

fn sweep(cmd: &Command, ctx: &Context) -> Result<Outcome, CliError> {
    let Command::Sweep { job, algebra: name, mode, scale, lambda, mu, delta, order, no_stabilize } = cmd else {
        return Err(CliError::Core(CoreError::Internal("sweep dispatch".into())));
    };
    let g = algebra(name, (*mode).into(), *scale)?;
    let empty = RatList::default();
    let (targets, by_delta) = match (mu, delta) {
        (Some(m), None) => (m, false),
        (None, Some(d)) => (d, true),
        (None, None) => (&empty, false),
        _ => return Err(CliError::Usage("at most one of --mu and --delta".into())),
    };
    let mut cells: Vec<(Rat, Rat)> = Vec::new();
    for l in &lambda.0 {
        for t in &targets.0 {
            let m = if by_delta { l.clone() + t.clone() } else { t.clone() };
            cells.push((l.clone(), m));
        }
    }
    cells.sort();
    cells.dedup();
    let results: Vec<(SweepRow, i32)> = cells.par_iter().map(|(l, m)| sweep_cell(*job, &g, l, m, *order, !*no_stabilize, ctx)).collect();
    let code = results.iter().map(|(_, c)| *c).max().unwrap_or(0);
    let rows: Vec<SweepRow> = results.into_iter().map(|(r, _)| r).collect();
    let mut t = Table::new(&["λ", "μ", "δ", "dim", "detail", "error"]);
    for r in &rows {
        t.push(vec![r.lambda.clone(), r.mu.clone(), r.delta.clone(), opt(&r.dim), r.detail.clone(), opt(&r.error)]);
    }
    let job_name = serde_json::to_value(job).ok().and_then(|v| v.as_str().map(String::from)).unwrap_or_default();
    let res = SweepResult { job: job_name, algebra: g.name().to_string(), rows };
    let mut out = Outcome::ok(&res, t.render())?;
    out.code = code;
    Ok(out)
}

fn sweep_cell(job: SweepJob, g: &Subalgebra, l: &Rat, m: &Rat, order: Option<usize>, stabilize: bool, ctx: &Context) -> (SweepRow, i32) {
    let pair = PairArgs { lambda: Weight::Value(l.clone()), mu: Some(Weight::Value(m.clone())), delta: None };
    let computed: Result<(Option<usize>, String), CliError> = match job {
        SweepJob::Cohomology => cohomology_report(g, &pair, stabilize, 0, ctx).map(|r| {
            let dim = r.stabilized_dim.or_else(|| r.truncations.last().map(|t| t.dim));
            (dim, r.representatives.iter().map(|x| x.pretty.clone()).collect::<Vec<_>>().join("; "))
        }),
        SweepJob::Relative => finite_only(g).and_then(|_| relative_report(g, &pair, order)).map(|r| {
            let dim = r.stabilized_dim.or_else(|| r.truncations.last().map(|t| t.dim));
            (dim, r.representatives.iter().map(|x| x.pretty.clone()).collect::<Vec<_>>().join("; "))
        }),
        SweepJob::SolveQuant => solve_quant_result(g, order.unwrap_or(1), &pair)
            .map(|r| (Some(r.generic_dim), r.normalized.map_or(String::new(), |n| format!("({})", n.join(", "))))),
        SweepJob::FullQuant => finite_only(g).and_then(|_| Ok(full_quant_exists(l, m, g)?)).map(|r| {
            let detail =
                format!("exists={} vect={} equal={}{}", r.exists, r.vect_exists, r.spaces_equal, if r.flagged { " FLAGGED" } else { "" });
            (Some(r.exists as usize), detail)
        }),
    };
    let (dim, detail, error, code) = match computed {
        Ok((d, s)) => (d, s, None, 0),
        Err(e) => (None, String::new(), Some(e.to_string()), e.exit_code()),
    };
    let row = SweepRow { lambda: fmt_rat(l), mu: fmt_rat(m), delta: fmt_rat(&(m.clone() - l.clone())), dim, detail, error };
    (row, code)
}

fn finite_only(g: &Subalgebra) -> Result<(), CliError> {
    if g.is_formal() {
        Err(CliError::Usage("this job needs a finite-dimensional algebra".into()))
    } else {
        Ok(())
    }
}
