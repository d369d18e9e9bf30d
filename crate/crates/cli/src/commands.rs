use std::path::Path;

use qmalg_core::braidings::{
    baxterize, braid_relation, check_trace_identities, classify, compatibility, solve_skew_inverse, Flavor,
    RelationCheck,
};
use qmalg_core::ncalg::{present, Alphabet, IdealOracle, NCMatrix, NCPolynomial, OracleConfig, System};
use qmalg_core::qdet::{
    cayley_hamilton, char_poly_expand, elementary_symmetric, group_like_check, inverse_expression, operator_strings,
    quantum_det, ChKind,
};
use qmalg_core::scalars::{parse_scalar, RationalFunction as RF};
use qmalg_core::symmetrizers::{build_tower, default_k_max, detect_even, pairing_vfu, poincare_dims, TowerKind};
use qmalg_core::tensorspace::TensorOperator;
use qmalg_core::yangians::{
    bethe_pairs, current_elementary, specialized_ratio_check, yangian_det, yangian_relations, ModeAlphabet, PairPolicy,
};
use serde_json::{json, Value};

use crate::args::{AlgebraInput, ChKindArg, Cli, Command, FlavorArg, KindArg, PairsArg, QMode, SystemArg};
use crate::input::{load_operator, load_pair, parse_expr, specialize_operator};
use crate::report::Outcome;
use crate::{corpus, CliError, CliResult};

/// Default point for numeric screens when no `q0` was given.
const DEFAULT_SCREEN_Q: &str = "7/5";

pub fn dispatch(cli: &Cli, base: &Path) -> Outcome {
    match run_command(cli, base) {
        Ok((verdict, fields)) => Outcome::finish(cli, verdict, fields),
        Err(e) => Outcome::failed(cli, &e),
    }
}

fn run_command(cli: &Cli, base: &Path) -> CliResult<(bool, Value)> {
    let mode = &cli.global.q_mode;
    if matches!(mode, QMode::Numeric(_)) && !cli.global.screen_only && !matches!(cli.command, Command::Corpus { .. }) {
        return Err(CliError::Usage(
            "numeric q-mode gives screens, not proofs; pass --screen-only to accept that".into(),
        ));
    }
    let config = OracleConfig {
        degree_cap: cli.global.degree_cap.unwrap_or(OracleConfig::default().degree_cap),
        ..OracleConfig::default()
    };
    let load = |arg: &str| -> CliResult<TensorOperator> { specialize_operator(&load_operator(arg, base)?, mode) };
    match &cli.command {
        Command::CheckBraiding(i) => check_braiding(&load(&i.input)?),
        Command::Classify(i) => classify_cmd(&load(&i.input)?),
        Command::CheckCompat(p) => {
            let l = load_pair(&p.r, &p.f, base, mode)?;
            check_compat(&l.r, &l.f)
        }
        Command::SkewInverse(i) => skew_inverse(&load(&i.input)?),
        Command::BaxterizeCheck { input, flavor, screen_count } => {
            // the screen specializes internally, so the symbolic operator is kept
            baxterize_check(&load_operator(&input.input, base)?, *flavor, *screen_count, cli)
        }
        Command::Symmetrizers { input, kind, k_max } => symmetrizers(&load(&input.input)?, *kind, *k_max),
        Command::DetectEven { input, k_max } => detect_even_cmd(&load(&input.input)?, *k_max),
        Command::Present(a) => {
            let pres = algebra(a, base, mode)?.1;
            Ok((true, json!({ "presentation": pres.to_json_value(), "relation_count": pres.relations.len() })))
        }
        Command::Reduce { algebra: a, expr } => {
            let oracle = IdealOracle::new(algebra(a, base, mode)?.1, config);
            let al = oracle.presentation().alphabet.clone();
            let x = parse_expr(expr, &al, mode)?;
            let red = oracle.reduce(&x)?;
            Ok((
                red.is_zero(),
                json!({
                    "expr": x.display(&al),
                    "residual": red.residual.display(&al),
                    "reduces_to_zero": red.is_zero(),
                    "exact": oracle.is_graded(),
                }),
            ))
        }
        Command::Central { algebra: a, expr } => {
            let oracle = IdealOracle::new(algebra(a, base, mode)?.1, config);
            let al = oracle.presentation().alphabet.clone();
            let x = parse_expr(expr, &al, mode)?;
            let check = oracle.is_central(&x)?;
            Ok((
                check.central,
                json!({
                    "expr": x.display(&al),
                    "central": check.central,
                    "witness": witness_json(&check.witness, &al),
                }),
            ))
        }
        Command::Qdet { algebra: a, forms, r_trace, k_max, require_central } => {
            qdet(a, forms, *r_trace, *k_max, *require_central, base, mode, config)
        }
        Command::CayleyHamilton { pair, kind, inverse, k_max } => {
            let l = load_pair(&pair.r, &pair.f, base, mode)?;
            cayley_hamilton_cmd(&l.r, &l.f, l.f_is_r, *kind, *inverse, *k_max, config)
        }
        Command::Yangian { pair, flavor, truncation, re_type, pairs } => {
            let l = load_pair(&pair.r, &pair.f, base, mode)?;
            let re_type = re_type.unwrap_or(l.f_is_r);
            yangian(&l.r, &l.f, core_flavor(*flavor), *truncation, re_type, *pairs, config)
        }
        Command::Corpus { dir, bless } => corpus::run_corpus(dir.as_deref(), *bless),
    }
}

fn core_flavor(f: FlavorArg) -> Flavor {
    match f {
        FlavorArg::Rational => Flavor::Rational,
        FlavorArg::Trigonometric => Flavor::Trigonometric,
    }
}

fn core_system(s: SystemArg) -> System {
    match s {
        SystemArg::Qma => System::Qma,
        SystemArg::HqaSymSkew => System::HqaSymSkew,
        SystemArg::HqaSkewSym => System::HqaSkewSym,
    }
}

fn algebra(a: &AlgebraInput, base: &Path, mode: &QMode) -> CliResult<(crate::input::Loaded, qmalg_core::ncalg::Presentation)> {
    let l = load_pair(&a.pair.r, &a.pair.f, base, mode)?;
    let pres = present(&l.r, &l.f, core_system(a.system))?;
    Ok((l, pres))
}

fn position(w: Option<(usize, usize)>) -> Value {
    w.map_or(Value::Null, |(row, col)| json!({ "row": row, "col": col }))
}

fn witness_json(w: &Option<(u32, NCPolynomial)>, al: &Alphabet) -> Value {
    w.as_ref().map_or(Value::Null, |(g, res)| {
        json!({ "generator": al.name(*g), "commutator_residual": res.display(al) })
    })
}

fn strings(xs: &[RF]) -> Vec<String> {
    xs.iter().map(|x| x.to_string()).collect()
}

fn nc_matrix_strings(m: &NCMatrix, al: &Alphabet) -> Vec<Vec<String>> {
    (0..m.size()).map(|i| (0..m.size()).map(|j| m.get(i, j).display(al)).collect()).collect()
}

fn check_braiding(op: &TensorOperator) -> CliResult<(bool, Value)> {
    let check = braid_relation(op)?;
    let kind = classify(op).kind;
    Ok((check.holds, json!({ "kind": kind, "witness": position(check.witness) })))
}

fn classify_cmd(op: &TensorOperator) -> CliResult<(bool, Value)> {
    let p = classify(op);
    Ok((
        p.is_symmetry(),
        json!({
            "kind": p.kind,
            "hecke_parameter": p.hecke_parameter.as_ref().map(|x| x.to_string()),
            "skew_invertible": p.skew_invertible,
            "c_matrix": p.c_matrix.as_ref().map(operator_strings),
        }),
    ))
}

fn check_compat(r: &TensorOperator, f: &TensorOperator) -> CliResult<(bool, Value)> {
    let checks: [RelationCheck; 2] = compatibility(r, f)?;
    let witness = checks
        .iter()
        .enumerate()
        .find_map(|(k, c)| c.witness.map(|(row, col)| json!({ "relation": k + 1, "row": row, "col": col })));
    Ok((
        checks.iter().all(|c| c.holds),
        json!({
            "relations": checks.iter().map(|c| c.holds).collect::<Vec<_>>(),
            "witness": witness,
        }),
    ))
}

fn skew_inverse(op: &TensorOperator) -> CliResult<(bool, Value)> {
    let s = solve_skew_inverse(op)?;
    let traces = check_trace_identities(op, &s.c)?;
    Ok((
        traces,
        json!({
            "psi": operator_strings(&s.psi),
            "c": operator_strings(&s.c),
            "contractions": true,
            "trace_identities": traces,
        }),
    ))
}

fn baxterize_check(op: &TensorOperator, flavor: FlavorArg, count: usize, cli: &Cli) -> CliResult<(bool, Value)> {
    let q0 = match &cli.global.q_mode {
        QMode::Numeric(q0) => q0.clone(),
        QMode::Symbolic => parse_scalar(DEFAULT_SCREEN_Q)?.as_rational().expect("rational constant"),
    };
    let b = baxterize(op, core_flavor(flavor))?;
    let report = b.check(&q0, count, cli.global.screen_only)?;
    Ok((
        report.holds(),
        json!({
            "flavor": report.flavor,
            "symbolic": report.symbolic,
            "screen": { "q0": q0.to_string(), "passed": report.screen_passed, "total": report.screen_total },
            "degeneration": report.degeneration,
        }),
    ))
}

fn symmetrizers(op: &TensorOperator, kind: KindArg, k_max: Option<usize>) -> CliResult<(bool, Value)> {
    let kind = match kind {
        KindArg::Skew => TowerKind::Skew,
        KindArg::Symmetric => TowerKind::Symmetric,
    };
    let tower = build_tower(op, kind, k_max.unwrap_or_else(|| default_k_max(op.dim())))?;
    let idempotent = tower
        .levels
        .iter()
        .map(|l| Ok(l.compose(l)? == *l))
        .collect::<qmalg_core::Result<Vec<bool>>>()?;
    Ok((
        idempotent.iter().all(|&b| b),
        json!({
            "kind": match kind { TowerKind::Skew => "skew", TowerKind::Symmetric => "symmetric" },
            "parameter": tower.x.to_string(),
            "dims": poincare_dims(&tower),
            "idempotent": idempotent,
            "level_2": tower.level(2).map(operator_strings),
        }),
    ))
}

fn detect_even_cmd(op: &TensorOperator, k_max: Option<usize>) -> CliResult<(bool, Value)> {
    let tower = build_tower(op, TowerKind::Skew, k_max.unwrap_or_else(|| default_k_max(op.dim())))?;
    let cert = detect_even(&tower)?;
    Ok((
        cert.pairing.is_one(),
        json!({
            "m": cert.m,
            "u": strings(&cert.u.entries),
            "v": strings(&cert.v.entries),
            "dims": cert.dims,
            "pairing": cert.pairing.to_string(),
        }),
    ))
}

#[allow(clippy::too_many_arguments)]
fn qdet(
    a: &AlgebraInput,
    forms: &[String],
    r_trace: bool,
    k_max: Option<usize>,
    require_central: bool,
    base: &Path,
    mode: &QMode,
    config: OracleConfig,
) -> CliResult<(bool, Value)> {
    let (l, pres) = algebra(a, base, mode)?;
    let al = pres.alphabet.clone();
    let tower = build_tower(&l.r, TowerKind::Skew, k_max.unwrap_or_else(|| default_k_max(l.r.dim())))?;
    let cert = detect_even(&tower)?;
    let oracle = IdealOracle::new(pres.clone(), config);
    let candidates = forms.iter().map(|s| parse_expr(s, &al, mode)).collect::<CliResult<Vec<_>>>()?;
    let c_r = solve_skew_inverse(&l.r)?.c;
    let weight = if r_trace { c_r.clone() } else { solve_skew_inverse(&l.f)?.c };
    let rep = quantum_det(&oracle, &cert, &l.f, &candidates, Some(&weight))?;
    let factor = rep.factor_vfu.clone().expect("trace weight supplied");
    let em = elementary_symmetric(&tower, &l.f, &weight, cert.m)?;
    let factor_holds = oracle.equal_mod(&em, &rep.canonical.scale(&factor))?;

    let qma = a.system == SystemArg::Qma;
    let ch_kind = if l.f_is_r { ChKind::Re } else { ChKind::GeneralQma };
    let ch = if qma && (ch_kind == ChKind::Re || cert.m == 2) {
        Some(cayley_hamilton(&oracle, &tower, &l.f, &c_r, cert.m, ch_kind)?)
    } else {
        None
    };
    let group_like = if qma && l.f_is_flip {
        Some(group_like_check(&pres, &l.f, &rep.canonical, config)?)
    } else {
        None
    };

    let verdict = rep.reduced_forms.iter().all(|f| f.proven)
        && factor_holds
        && ch.as_ref().is_none_or(|c| c.holds)
        && group_like.unwrap_or(true)
        && (!require_central || rep.central);
    let mut fields = rep.to_json(&al);
    let extra = json!({
        "system": pres.source,
        "m": cert.m,
        "trace": if r_trace { "R" } else { "F" },
        "e_m": em.display(&al),
        "factor_identity": factor_holds,
        "cayley_hamilton": ch.as_ref().map(|c| json!({
            "kind": ch_kind,
            "holds": c.holds,
            "failures": failures_json(&c.failures, &al),
        })),
        "group_like": group_like,
        "exact": oracle.is_graded(),
    });
    merge(&mut fields, extra);
    Ok((verdict, fields))
}

fn merge(into: &mut Value, extra: Value) {
    if let (Value::Object(a), Value::Object(b)) = (into, extra) {
        a.extend(b);
    }
}

fn failures_json(f: &[(usize, usize, NCPolynomial)], al: &Alphabet) -> Vec<Value> {
    f.iter()
        .map(|(i, j, r)| json!({ "row": i, "col": j, "residual": r.display(al) }))
        .collect()
}

fn cayley_hamilton_cmd(
    r: &TensorOperator,
    f: &TensorOperator,
    f_is_r: bool,
    kind: Option<ChKindArg>,
    inverse: bool,
    k_max: Option<usize>,
    config: OracleConfig,
) -> CliResult<(bool, Value)> {
    let kind = match kind {
        Some(ChKindArg::Re) => ChKind::Re,
        Some(ChKindArg::GeneralQma) => ChKind::GeneralQma,
        None if f_is_r => ChKind::Re,
        None => ChKind::GeneralQma,
    };
    if inverse && !f_is_r {
        return Err(CliError::Usage("--inverse needs the reflection equation algebra (F = R)".into()));
    }
    let tower = build_tower(r, TowerKind::Skew, k_max.unwrap_or_else(|| default_k_max(r.dim())))?;
    let cert = detect_even(&tower)?;
    let pres = present(r, f, System::Qma)?;
    let al = pres.alphabet.clone();
    let oracle = IdealOracle::new(pres, config);
    let c_r = solve_skew_inverse(r)?.c;
    let ch = cayley_hamilton(&oracle, &tower, f, &c_r, cert.m, kind)?;
    let poly = if f_is_r { Some(char_poly_expand(&oracle, &tower, &cert, &c_r)?) } else { None };
    let inv = if inverse { Some(inverse_expression(&oracle, &tower, &c_r, cert.m)?) } else { None };

    let verdict = ch.holds && poly.as_ref().is_none_or(|p| p.holds()) && inv.as_ref().is_none_or(|i| i.verified);
    Ok((
        verdict,
        json!({
            "m": cert.m,
            "kind": kind,
            "holds": ch.holds,
            "failures": failures_json(&ch.failures, &al),
            "char_poly": poly.as_ref().map(|p| json!({
                "coefficients": p.coefficients.iter().map(|c| c.display(&al)).collect::<Vec<_>>(),
                "alphas": strings(&p.alphas),
                "matches": p.matches,
                "trace_reduction": p.trace_reduction,
            })),
            "inverse": inv.as_ref().map(|i| json!({
                "alphabet": i.presentation.alphabet.names(),
                "x": nc_matrix_strings(&i.inverse, &i.presentation.alphabet),
                "verified": i.verified,
            })),
        }),
    ))
}

fn yangian(
    r: &TensorOperator,
    f: &TensorOperator,
    flavor: Flavor,
    k: usize,
    re_type: bool,
    pairs: PairsArg,
    config: OracleConfig,
) -> CliResult<(bool, Value)> {
    let n = r.dim();
    let modes = ModeAlphabet::new(n, k, re_type)?;
    let al = modes.alphabet().clone();
    let pres = yangian_relations(r, f, flavor, &modes)?;
    let relation_count = pres.relations.len();
    let oracle = IdealOracle::new(
        pres,
        OracleConfig {
            box_weight: Some(2 * k as u32),
            ..config
        },
    );
    let skew = build_tower(r, TowerKind::Skew, default_k_max(n))?;
    let sym = build_tower(r, TowerKind::Symmetric, 2)?;
    let cert = detect_even(&skew)?;
    let series = modes.generating_series(flavor, k)?;
    let c_f = solve_skew_inverse(f)?.c;
    let policy = match pairs {
        PairsArg::Total => PairPolicy::TotalOrder,
        PairsArg::Each => PairPolicy::EachOrder,
    };

    let currents = (1..=cert.m)
        .map(|j| current_elementary(&skew, &c_f, f, &series, j))
        .collect::<qmalg_core::Result<Vec<_>>>()?;
    let mut bethe = Vec::new();
    let mut bethe_ok = true;
    for j in 1..=cert.m {
        for l in j..=cert.m {
            let results = bethe_pairs(&oracle, &currents[j - 1], &currents[l - 1], policy)?;
            let holds = results.iter().all(|(_, _, res)| res.is_zero());
            bethe_ok &= holds;
            let orders: Vec<Value> = results
                .iter()
                .map(|(r, s, res)| {
                    let mut o = json!({ "r": r, "s": s, "holds": res.is_zero() });
                    if !res.is_zero() {
                        o["residual"] = json!(res.display(&al));
                    }
                    o
                })
                .collect();
            bethe.push(json!({ "j": j, "k": l, "holds": holds, "orders": orders }));
        }
    }

    let det = yangian_det(&cert, f, &series, &skew.x)?;
    let factor = pairing_vfu(&cert.v, &cert.u, &c_f)?;
    let top = &currents[cert.m - 1];
    let factor_orders = (0..=k)
        .map(|o| match (top.element(o), det.element(o)) {
            (Some(e), Some(d)) => Ok(oracle.equal_mod(e, &d.scale(&factor))?),
            _ => Err(CliError::Core(qmalg_core::Error::Shape("scalar series expected".into()))),
        })
        .collect::<CliResult<Vec<bool>>>()?;
    let factor_ok = factor_orders.iter().all(|&b| b);

    let ratio = specialized_ratio_check(&oracle, &skew, &sym, f, &series)?;

    Ok((
        bethe_ok && factor_ok && ratio.holds,
        json!({
            "flavor": flavor,
            "truncation": k,
            "claims": format!("modulo u^-{}", k + 1),
            "re_type": re_type,
            "pair_policy": policy,
            "relation_count": relation_count,
            "exact": oracle.is_graded(),
            "m": cert.m,
            "bethe": bethe,
            "determinant_factor": { "factor": factor.to_string(), "orders": factor_orders, "holds": factor_ok },
            "specialized_ratio": {
                "holds": ratio.holds,
                "failures": ratio.failures.iter()
                    .map(|(o, res)| json!({ "order": o, "residual": res.display(&al) }))
                    .collect::<Vec<_>>(),
            },
            "unverified": ["determinant centrality", "group-like coproduct of the determinant"],
        }),
    ))
}
