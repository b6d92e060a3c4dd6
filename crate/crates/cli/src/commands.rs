use std::collections::BTreeSet;
use std::sync::Arc;

use ffk::csa::{construct_sibling_pair, parse_algebra, split_integral, Invariant, SymbolAlgebra};
use ffk::kochen::{
    self, beta, classify_beta, gamma, kochen_representation, KochenContext, KochenValue,
};
use ffk::laurent::{default_precision, hensel_nth_root, LaurentSeries};
use ffk::local::LocalData;
use ffk::parse::{parse_field_spec, parse_poly, parse_ratfunc};
use ffk::places::{parse_place, split_type, weak_approximation, Constraint, Place};
use ffk::polyring::enumerate_pn_plus;
use ffk::tower::{
    count_bounded, enumerate_bounded, norm_max, parse_tower_element, verify_integral_basis,
    TowerSpec,
};
use ffk::{Error, Field, ParseError, Result};
use serde_json::{json, Value};

use crate::{Cli, Command, FieldArgs, TowerArgs};

pub struct Output {
    pub text: String,
    pub json: Value,
}

fn out(text: impl Into<String>, json: Value) -> Result<Output> {
    Ok(Output {
        text: text.into(),
        json,
    })
}

fn field(args: &FieldArgs) -> Result<Field> {
    let p = args.p.ok_or_else(|| ParseError::new(0, "missing --p"))?;
    let mut spec = format!("p={p},e={}", args.e);
    if let Some(m) = &args.modulus {
        spec.push_str(&format!(",mod={m}"));
    }
    parse_field_spec(&spec)
}

fn tower(field: &Field, args: &TowerArgs) -> Result<Arc<TowerSpec>> {
    let levels = split_list(&args.levels)
        .map(|s| parse_poly(field, s))
        .collect::<Result<Vec<_>>>()?;
    if levels.is_empty() {
        return Ok(TowerSpec::base(field));
    }
    TowerSpec::new(field, args.n, levels)
}

fn split_list(src: &str) -> impl Iterator<Item = &str> {
    src.split(',').map(str::trim).filter(|s| !s.is_empty())
}

fn places(field: &Field, src: &str) -> Result<BTreeSet<Place>> {
    split_list(src).map(|s| parse_place(field, s)).collect()
}

fn series_json(s: &LaurentSeries) -> Value {
    let f = s.field();
    json!({
        "order": s.order().or(s.end()),
        "coeffs": s.coeffs().iter().map(|&c| f.render(c)).collect::<Vec<_>>(),
        "prec": s.rel_prec(),
    })
}

fn invariant_json(place: &Place, inv: &Invariant) -> Value {
    json!({ "place": place.to_string(), "num": inv.num, "den": inv.den })
}

fn algebra_json(alg: &SymbolAlgebra) -> Result<Value> {
    let profile = alg.invariant_profile()?;
    Ok(json!({
        "a": alg.a().to_string(),
        "b": alg.b().to_string(),
        "l": alg.degree(),
        "invariants": profile.iter().map(|(p, i)| invariant_json(p, i)).collect::<Vec<_>>(),
    }))
}

fn profile_text(alg: &SymbolAlgebra) -> Result<String> {
    let profile = alg.invariant_profile()?;
    if profile.is_empty() {
        return Ok("split everywhere".into());
    }
    Ok(profile
        .iter()
        .map(|(p, i)| format!("{p}: {i}"))
        .collect::<Vec<_>>()
        .join("\n"))
}

fn parse_constraint(field: &Field, src: &str) -> Result<Constraint> {
    let parts: Vec<&str> = src.split(':').collect();
    let [place, target, m] = parts[..] else {
        return Err(ParseError::new(
            0,
            format!("constraint `{src}` is not place:target:min_valuation"),
        )
        .into());
    };
    let offset = place.len() + target.len() + 2;
    let min_valuation = m
        .trim()
        .parse()
        .map_err(|_| ParseError::new(offset, format!("`{m}` is not an integer")))?;
    Ok(Constraint {
        place: parse_place(field, place)?,
        target: parse_ratfunc(field, target)?,
        min_valuation,
    })
}

pub fn run(cli: &Cli) -> Result<Output> {
    let f = field(&cli.field)?;
    match &cli.command {
        Command::FieldInfo { n } => {
            let zeta = n.map(|n| f.primitive_root_of_unity(n)).transpose()?;
            let mut text = format!(
                "F_{} ({f})\ngenerator: {}",
                f.size(),
                f.render(f.generator())
            );
            if let (Some(n), Some(z)) = (n, zeta) {
                text.push_str(&format!(
                    "\nprimitive {n}-th root of unity: {}",
                    f.render(z)
                ));
            }
            out(
                text,
                json!({
                    "p": f.characteristic(),
                    "e": f.degree(),
                    "q": f.size(),
                    "modulus": f.render_modulus(),
                    "generator": f.render(f.generator()),
                    "root_of_unity": zeta.map(|z| f.render(z)),
                }),
            )
        }
        Command::Irreducibles { n, max_degree } => {
            let polys: Vec<String> = enumerate_pn_plus(&f, *n as usize, *max_degree)?
                .iter()
                .map(|p| p.to_string())
                .collect();
            out(
                polys.join("\n"),
                json!({ "n": n, "max_degree": max_degree, "polynomials": polys }),
            )
        }
        Command::HenselRoot { poly, n, prec } => {
            let p = parse_poly(&f, poly)?;
            let root = hensel_nth_root(&p, *n, prec.unwrap_or_else(default_precision))?;
            out(root.render_at_infinity(), series_json(&root))
        }
        Command::PlaceVal { place, r } => {
            let place = parse_place(&f, place)?;
            let r = parse_ratfunc(&f, r)?;
            let v = place.valuation(&r);
            let residue = if v.is_none_or(|v| v >= 0) {
                Some(place.residue(&r)?.to_string())
            } else {
                None
            };
            let text = format!(
                "valuation: {}\nresidue: {}",
                v.map_or("inf".to_string(), |v| v.to_string()),
                residue.as_deref().unwrap_or("none (pole)")
            );
            out(
                text,
                json!({ "place": place.to_string(), "valuation": v, "residue": residue }),
            )
        }
        Command::WeakApprox { constraints } => {
            let cs = constraints
                .iter()
                .map(|c| parse_constraint(&f, c))
                .collect::<Result<Vec<_>>>()?;
            let y = weak_approximation(&f, &cs)?;
            out(y.to_string(), json!({ "result": y.to_string() }))
        }
        Command::PlaceSplit { place, n, poly } => {
            let place = parse_place(&f, place)?;
            let p = parse_poly(&f, poly)?;
            let split = split_type(&place, *n, &p)?;
            let text = split
                .iter()
                .map(|(e, fd)| format!("e={e} f={fd}"))
                .collect::<Vec<_>>()
                .join("\n");
            let parts: Vec<Value> = split
                .iter()
                .map(|(e, fd)| json!({ "e": e, "f": fd }))
                .collect();
            out(
                text,
                json!({ "place": place.to_string(), "n": n, "poly": p.to_string(), "split": parts }),
            )
        }
        Command::KochenEval { tower: t, place, x } => {
            let spec = tower(&f, t)?;
            let base = parse_place(&f, place)?;
            let a = parse_tower_element(&spec, x)?;
            let ctx = KochenContext::new(&f, &base);
            let (b, g) = (beta(&a, &ctx), gamma(&a, &ctx));
            let mut lines = vec![format!("beta: {b}"), format!("gamma: {g}")];
            let mut cases = Vec::new();
            if !b.is_pole() {
                let local = LocalData::new(&spec, &base)?;
                for p in local.places() {
                    let case = classify_beta(&a, &local, p.index)?;
                    let direct = match &b {
                        KochenValue::Value(v) => local.valuation(v, p.index)?,
                        KochenValue::Pole => unreachable!(),
                    };
                    lines.push(format!(
                        "{p}: case {:?}, predicted v(beta) {}, actual {}",
                        case.tag,
                        case.predicted,
                        direct.map_or("inf".into(), |v| v.to_string())
                    ));
                    cases.push(json!({
                        "place": p.to_string(),
                        "e": p.e,
                        "f": p.f,
                        "tag": case.tag,
                        "predicted": case.predicted.to_string(),
                        "valuation": direct,
                    }));
                }
            }
            let show = |v: &KochenValue| v.value().map(|x| x.to_string());
            out(
                lines.join("\n"),
                json!({
                    "input": a.to_string(),
                    "place": base.to_string(),
                    "pole": b.is_pole(),
                    "beta": show(&b),
                    "gamma": show(&g),
                    "cases": cases,
                }),
            )
        }
        Command::KochenCheck {
            tower: t,
            place,
            samples,
        } => {
            let spec = tower(&f, t)?;
            let local = LocalData::new(&spec, &parse_place(&f, place)?)?;
            let report = kochen::gamma_integrality_sample(&local, *samples, cli.seed)?;
            let mut text = format!(
                "samples: {}\nviolations: {}",
                report.samples,
                report.violations.len()
            );
            for v in &report.violations {
                text.push_str(&format!(
                    "\n  {} at {}: v = {}",
                    v.input, v.place, v.valuation
                ));
            }
            out(text, serde_json::to_value(&report).expect("serializable"))
        }
        Command::KochenRepresent { tower: t, place, r } => {
            let spec = tower(&f, t)?;
            let local = LocalData::new(&spec, &parse_place(&f, place)?)?;
            let r = parse_tower_element(&spec, r)?;
            let tr = kochen_representation(&local, &r)?;
            out(
                format!("x = {}\ny = {}\nz = {}", tr.x, tr.y, tr.z),
                json!({ "r": r.to_string(), "x": tr.x.to_string(), "y": tr.y.to_string(), "z": tr.z.to_string() }),
            )
        }
        Command::TowerNorm { tower: t, x } => {
            let spec = tower(&f, t)?;
            let x = parse_tower_element(&spec, x)?;
            let norm = x.norm();
            let nm = norm_max(&x, None)?;
            out(
                format!("norm: {norm}\nnorm_max: {nm}"),
                json!({
                    "element": x.to_string(),
                    "norm": norm.to_string(),
                    "norm_max": { "base": nm.base, "exponent": nm.exponent },
                }),
            )
        }
        Command::TowerEnumerate {
            tower: t,
            bound,
            count_only,
        } => {
            let spec = tower(&f, t)?;
            let count = count_bounded(&spec, *bound)?;
            let count = u64::try_from(count)
                .map_err(|_| Error::Unsupported(format!("{count} elements")))?;
            if *count_only {
                return out(count.to_string(), json!({ "count": count }));
            }
            let elems: Vec<String> = enumerate_bounded(&spec, *bound)?
                .iter()
                .map(|x| x.to_string())
                .collect();
            out(
                elems.join("\n"),
                json!({ "count": count, "elements": elems }),
            )
        }
        Command::TowerDisc { poly, n } => {
            let p = parse_poly(&f, poly)?;
            let report = verify_integral_basis(&p, *n)?;
            let vals: Vec<Value> = report
                .valuations
                .iter()
                .map(|(pl, v)| json!({ "place": pl.to_string(), "valuation": v }))
                .collect();
            let text = format!(
                "discriminant: {}\n{}\nverified: {}",
                report.disc,
                report
                    .valuations
                    .iter()
                    .map(|(pl, v)| format!("valuation at {pl}: {v}"))
                    .collect::<Vec<_>>()
                    .join("\n"),
                report.verified
            );
            out(
                text,
                json!({
                    "poly": p.to_string(),
                    "n": n,
                    "discriminant": report.disc.to_string(),
                    "valuations": vals,
                    "verified": report.verified,
                }),
            )
        }
        Command::CsaInvariants { a, b, l } => {
            let alg = SymbolAlgebra::new(parse_ratfunc(&f, a)?, parse_ratfunc(&f, b)?, *l)?;
            let profile = alg.invariant_profile()?;
            out(
                profile_text(&alg)?,
                Value::Array(profile.iter().map(|(p, i)| invariant_json(p, i)).collect()),
            )
        }
        Command::CsaPair { primary, q1, q2, l } => {
            let [p, a, b] = [primary, q1, q2].map(|s| parse_place(&f, s));
            let pair = construct_sibling_pair(&f, &p?, &a?, &b?, *l)?;
            let text = format!(
                "A = {}\n{}\nB = {}\n{}",
                pair.first,
                profile_text(&pair.first)?,
                pair.second,
                profile_text(&pair.second)?
            );
            out(
                text,
                json!({ "first": algebra_json(&pair.first)?, "second": algebra_json(&pair.second)? }),
            )
        }
        Command::CsaSample { a, b, l, samples } => {
            let alg = parse_algebra(&f, &format!("({a} | {b}; l={l})"))?;
            let ramified = alg.ramified_places()?;
            let traces = alg.sample_trace_of_norm_one(*samples, cli.seed)?;
            let mut violations = Vec::new();
            for tr in &traces {
                for p in &ramified {
                    if let Some(v) = p.valuation(tr).filter(|&v| v < 0) {
                        violations.push(json!({ "input": tr.to_string(), "place": p.to_string(), "valuation": v }));
                    }
                }
            }
            let text = format!(
                "samples: {}\nramified: {}\nviolations: {}",
                traces.len(),
                ramified
                    .iter()
                    .map(|p| p.to_string())
                    .collect::<Vec<_>>()
                    .join(", "),
                violations.len()
            );
            out(
                text,
                json!({
                    "samples": traces.len(),
                    "ramified": ramified.iter().map(|p| p.to_string()).collect::<Vec<_>>(),
                    "traces": traces.iter().map(|t| t.to_string()).collect::<Vec<_>>(),
                    "violations": violations,
                }),
            )
        }
        Command::CsaSplit {
            x,
            delta_a,
            delta_b,
        } => {
            let x = parse_ratfunc(&f, x)?;
            let y = split_integral(&x, &places(&f, delta_a)?, &places(&f, delta_b)?)?;
            out(
                y.to_string(),
                json!({ "x": x.to_string(), "y": y.to_string() }),
            )
        }
    }
}
