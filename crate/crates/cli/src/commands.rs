use std::collections::BTreeMap;
use std::path::Path;

use miniw_core::brst::{cohomology_dims, min_chain, verify_nilpotency, BrstComplex};
use miniw_core::category_o::{char_module, HighestWeightModule, ModuleKind, TruncationWindow};
use miniw_core::rational::{fmt_q, half, parse_q, Q};
use miniw_core::superalgebra::{build_algebra, SuperalgebraData};
use miniw_core::suite::{all_ids, generic_lambda, h0_by_class, run_suite};
use miniw_core::walgebra::{central_charge, phi_map, simple_w_character, w_verma_character, WCharacter};
use miniw_core::weights::{coord_dw, dw_of, finite_classes, from_coords, parse_lambda, AffineWeight};
use miniw_core::{MiniwError, Result};
use num_traits::Signed;
use serde_json::{json, Value};

use crate::{CharArgs, CohomologyArgs, Command, Format, InfoArgs, SuiteArgs, VerifyArgs, WcharArgs};

/// Runs one subcommand; `Ok(false)` means a check failed.
pub fn run(cmd: &Command, format: Format) -> Result<bool> {
    match cmd {
        Command::Info(a) => info(a, format),
        Command::Char(a) => char_cmd(a, format),
        Command::Wchar(a) => wchar(a, format),
        Command::Cohomology(a) => cohomology(a, format),
        Command::Verify(a) => verify(a, format),
        Command::Suite(a) => suite(a, format),
    }
}

fn invalid(field: &str, reason: impl Into<String>) -> MiniwError {
    MiniwError::InvalidConfig {
        field: field.into(),
        reason: reason.into(),
    }
}

fn qs(v: &[Q]) -> Vec<String> {
    v.iter().map(fmt_q).collect()
}

fn nonneg(field: &str, s: &str) -> Result<Q> {
    let v = parse_q(s).map_err(|e| invalid(field, e.to_string()))?;
    if v.is_negative() {
        return Err(invalid(field, "must be nonnegative"));
    }
    Ok(v)
}

fn which(s: &str) -> Result<ModuleKind> {
    s.parse()
}

fn pretty(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("serializable")
}

fn write_json(path: Option<&Path>, v: &Value) -> Result<()> {
    if let Some(p) = path {
        std::fs::write(p, pretty(v) + "\n").map_err(|e| invalid("json", format!("{}: {e}", p.display())))?;
    }
    Ok(())
}

fn info(a: &InfoArgs, format: Format) -> Result<bool> {
    let data = build_algebra(&a.algebra)?;
    let mut grades: Vec<Q> = data.grading.clone();
    grades.sort();
    grades.dedup();
    let rows: Vec<(Q, usize, usize)> = grades
        .iter()
        .map(|j| {
            let piece = data.graded_piece(j);
            let odd = piece.iter().filter(|b| data.is_odd(**b)).count();
            (j.clone(), piece.len() - odd, odd)
        })
        .collect();
    let c1 = central_charge(&data, &Q::from_integer(1.into()))?;
    match format {
        Format::Json => {
            let grad: Vec<Value> = rows
                .iter()
                .map(|(j, e, o)| json!({"grade": fmt_q(j), "dim": e + o, "even": e, "odd": o}))
                .collect();
            println!(
                "{}",
                pretty(&json!({
                    "algebra": data.name,
                    "dim": data.dim,
                    "even": data.even_dim(),
                    "odd": data.odd_dim(),
                    "sdim": data.superdimension(),
                    "dual_coxeter": fmt_q(&data.dual_coxeter()),
                    "gradation": grad,
                    "c_at_k1": fmt_q(&c1),
                }))
            );
        }
        Format::Csv => {
            println!("grade,dim,even,odd");
            for (j, e, o) in &rows {
                println!("{},{},{e},{o}", fmt_q(j), e + o);
            }
        }
        Format::Plain => {
            println!("algebra   {}", data.name);
            println!("dim       {} (even {}, odd {})", data.dim, data.even_dim(), data.odd_dim());
            println!("sdim      {}", data.superdimension());
            println!("h^v       {}", fmt_q(&data.dual_coxeter()));
            println!("c(1)      {}", fmt_q(&c1));
            println!("gradation");
            println!("  {:>6}  {:>4}  {:>4}  {:>4}", "j", "dim", "even", "odd");
            for (j, e, o) in &rows {
                println!("  {:>6}  {:>4}  {:>4}  {:>4}", fmt_q(j), e + o, e, o);
            }
        }
    }
    Ok(true)
}

fn char_cmd(a: &CharArgs, format: Format) -> Result<bool> {
    let data = build_algebra(&a.algebra)?;
    let lam = parse_lambda(&data, &a.lambda)?;
    let kind = which(&a.which)?;
    let window = TruncationWindow::new(a.depth, a.height, a.depth);
    let ch = char_module(&data, &lam, kind, &window);
    let weight = |c: &[i32; 3]| (&lam - &from_coords(&data, c)).to_string();
    let map: serde_json::Map<String, Value> = ch.entries.iter().map(|(c, d)| (weight(c), json!(d))).collect();
    let v = Value::Object(map);
    write_json(a.json.as_deref(), &v)?;
    match format {
        Format::Csv => {
            println!("c0,c1,c2,weight,dim");
            for (c, d) in &ch.entries {
                println!("{},{},{},\"{}\",{d}", c[0], c[1], c[2], weight(c));
            }
        }
        _ => println!("{}", pretty(&v)),
    }
    Ok(true)
}

fn has_half_grade(data: &SuperalgebraData) -> bool {
    !data.graded_piece(&half()).is_empty()
}

fn level_series(ch: &WCharacter, integer_only: bool) -> Vec<(Q, i64)> {
    ch.series().into_iter().filter(|(l, _)| !integer_only || l.is_integer()).collect()
}

/// (H^0 by level, all classes agree, per-class records).
type BrstComparison = (Vec<(Q, i64)>, bool, Vec<Value>);

fn wchar(a: &WcharArgs, format: Format) -> Result<bool> {
    let data = build_algebra(&a.algebra)?;
    let max = nonneg("max_level", &a.max_level)?;
    let lam = a.lambda.as_deref().map(|s| parse_lambda(&data, s)).transpose()?;
    let k = match (&a.k, &lam) {
        (Some(s), l) => {
            let k = parse_q(s).map_err(|e| invalid("k", e.to_string()))?;
            if let Some(l) = l {
                if l.level != k {
                    return Err(invalid("k", format!("{} differs from the level of lambda ({})", fmt_q(&k), fmt_q(&l.level))));
                }
            }
            Some(k)
        }
        (None, Some(l)) => Some(l.level.clone()),
        (None, None) => None,
    };
    if a.compare_brst && lam.is_none() {
        return Err(invalid("lambda", "--compare-brst needs a highest weight"));
    }
    let c = k.as_ref().map(|k| central_charge(&data, k)).transpose()?;
    let (ch, mults) = match &lam {
        Some(l) => {
            let s = simple_w_character(&data, l, &max, a.depth)?;
            (s.predicted, Some(s.multiplicities))
        }
        None => (w_verma_character(&data, &max), None),
    };
    let integer_only = !has_half_grade(&data);
    let series = level_series(&ch, integer_only);

    let mut brst: Option<BrstComparison> = None;
    if a.compare_brst {
        let l = lam.as_ref().expect("checked above");
        let res = h0_by_class(&data, l, ModuleKind::Simple, &max)?;
        let mut by_level: BTreeMap<Q, i64> = series.iter().map(|(lv, _)| (lv.clone(), 0)).collect();
        let mut agree = true;
        let mut classes = Vec::new();
        for (lv, hf, dims) in &res {
            let h0 = dims[&0] as i64;
            let want = ch.get(lv, hf);
            let ok = h0 == want && dims[&-1] == 0 && dims[&1] == 0;
            agree &= ok;
            *by_level.entry(lv.clone()).or_insert(0) += h0;
            classes.push(json!({
                "level": fmt_q(lv),
                "hf": qs(hf),
                "predicted": want,
                "dims": {"-1": dims[&-1], "0": dims[&0], "1": dims[&1]},
                "agree": ok,
            }));
        }
        brst = Some((by_level.into_iter().collect(), agree, classes));
    }

    let phi = lam.as_ref().map(|l| phi_map(&data, l));
    match format {
        Format::Json => {
            let mut v = json!({
                "algebra": data.name,
                "kind": if lam.is_some() { "simple" } else { "verma" },
                "max_level": fmt_q(&max),
                "series": series.iter().map(|(l, d)| json!({"level": fmt_q(l), "dim": d})).collect::<Vec<_>>(),
                "refined": ch.entries.iter().map(|((l, hf), d)| json!({"level": fmt_q(l), "hf": qs(hf), "dim": d})).collect::<Vec<_>>(),
            });
            let o = v.as_object_mut().expect("object");
            if let Some(k) = &k {
                o.insert("k".into(), json!(fmt_q(k)));
            }
            if let Some(c) = &c {
                o.insert("c".into(), json!(fmt_q(c)));
            }
            if let (Some(l), Some(p)) = (&lam, &phi) {
                o.insert("lambda".into(), json!(l.to_string()));
                o.insert("phi".into(), json!({"hf": qs(&p.hf_values), "s0": fmt_q(&p.s0)}));
            }
            if let Some(m) = &mults {
                let mm: serde_json::Map<String, Value> =
                    m.iter().map(|(b, n)| (format!("{},{},{}", b[0], b[1], b[2]), json!(n))).collect();
                o.insert("multiplicities".into(), Value::Object(mm));
            }
            if let Some((s, agree, classes)) = &brst {
                o.insert(
                    "brst".into(),
                    json!({
                        "series": s.iter().map(|(l, d)| json!({"level": fmt_q(l), "dim": d})).collect::<Vec<_>>(),
                        "classes": classes,
                        "agree": agree,
                    }),
                );
            }
            write_json(a.json.as_deref(), &v)?;
            println!("{}", pretty(&v));
        }
        Format::Csv => {
            if let Some((s, _, _)) = &brst {
                println!("level,dim,brst");
                for ((l, d), (_, b)) in series.iter().zip(s) {
                    println!("{},{d},{b}", fmt_q(l));
                }
            } else {
                println!("level,dim");
                for (l, d) in &series {
                    println!("{},{d}", fmt_q(l));
                }
            }
        }
        Format::Plain => {
            println!("algebra  {}", data.name);
            if let Some(k) = &k {
                println!("k        {}", fmt_q(k));
            }
            if let Some(c) = &c {
                println!("c(k)     {}", fmt_q(c));
            }
            if let Some(p) = &phi {
                println!("phi      hf=[{}]; s0={}", qs(&p.hf_values).join(", "), fmt_q(&p.s0));
            }
            match &brst {
                Some((s, _, _)) => {
                    println!("{:>6}  {:>6}  {:>6}", "level", "dim", "brst");
                    for ((l, d), (_, b)) in series.iter().zip(s) {
                        println!("{:>6}  {:>6}  {:>6}", fmt_q(l), d, b);
                    }
                }
                None => {
                    println!("{:>6}  {:>6}", "level", "dim");
                    for (l, d) in &series {
                        println!("{:>6}  {:>6}", fmt_q(l), d);
                    }
                }
            }
            let dims: Vec<String> = series.iter().map(|(_, d)| d.to_string()).collect();
            println!("series   {}", dims.join(","));
            if let Some((_, agree, _)) = &brst {
                println!("brst     {}", if *agree { "agree" } else { "DISAGREE" });
            }
        }
    }
    Ok(brst.is_none_or(|(_, agree, _)| agree))
}

fn parse_hf(data: &SuperalgebraData, s: &str) -> Result<Vec<Q>> {
    let inner = s.trim().trim_start_matches('[').trim_end_matches(']');
    let v: Vec<Q> = inner
        .split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(parse_q)
        .collect::<Result<_>>()
        .map_err(|e| invalid("xi_hf", e.to_string()))?;
    if v.len() != data.h_dim - 1 {
        return Err(invalid("xi_hf", format!("{} expects {} values", data.name, data.h_dim - 1)));
    }
    Ok(v)
}

fn cohomology(a: &CohomologyArgs, format: Format) -> Result<bool> {
    let data = build_algebra(&a.algebra)?;
    let lam = parse_lambda(&data, &a.lambda)?;
    let kind = which(&a.which)?;
    let offset = nonneg("xi_level", &a.xi_level)?;
    if a.chain > a.depth {
        return Err(invalid("chain", format!("start {} exceeds depth {}", a.chain, a.depth)));
    }
    let xi_hf = |b0: &[i32; 3]| -> Vec<Q> {
        let fin = from_coords(&data, b0);
        lam.h_part[1..].iter().zip(&fin.h_part[1..]).map(|(x, y)| x - y).collect()
    };
    let mut classes: Vec<[i32; 3]> =
        finite_classes(&data, &offset).into_iter().filter(|(_, o)| *o == offset).map(|(b, _)| b).collect();
    if classes.is_empty() {
        return Err(invalid("xi_level", format!("no t-weight class at offset {}", fmt_q(&offset))));
    }
    if let Some(s) = &a.xi_hf {
        let want = parse_hf(&data, s)?;
        classes.retain(|b| xi_hf(b) == want);
        if classes.is_empty() {
            return Err(invalid("xi_hf", format!("no class at offset {} with h^f part {s}", fmt_q(&offset))));
        }
    }
    if classes.len() > 1 {
        let opts: Vec<String> = classes.iter().map(|b| format!("[{}]", qs(&xi_hf(b)).join(","))).collect();
        return Err(invalid("xi_hf", format!("several classes share this offset; choose one of {}", opts.join(" "))));
    }
    let b0 = classes[0];
    let start = a.chain.max(min_chain(&offset));
    if start + 2 > a.depth {
        return Err(MiniwError::WindowTooSmall(format!(
            "offset {} needs chain lengths {start}..{} at least; depth is {}",
            fmt_q(&offset),
            start + 2,
            a.depth
        )));
    }
    let cx = BrstComplex::new(HighestWeightModule::new(&data, lam.clone(), kind))?;
    let r = cohomology_dims(&cx, &b0, &[-1, 0, 1], a.chain, a.depth)?;
    let hf = xi_hf(&b0);
    let dw = dw_of(&lam) - coord_dw(&data, &b0);
    let v = json!({
        "algebra": data.name,
        "lambda": lam.to_string(),
        "which": a.which,
        "xi": {"dW_offset": fmt_q(&r.dw_offset), "dW": fmt_q(&dw), "hf": qs(&hf), "beta0": b0},
        "dims": {"-1": r.dims[&-1], "0": r.dims[&0], "1": r.dims[&1]},
        "stabilized": r.stabilized,
        "window": {
            "start": start,
            "chain": r.chain,
            "depth": a.depth,
            "history": r.history.iter().map(|(l, d)| json!({"chain": l, "dims": [d[&-1], d[&0], d[&1]]})).collect::<Vec<_>>(),
        },
    });
    write_json(a.json.as_deref(), &v)?;
    match format {
        Format::Json => println!("{}", pretty(&v)),
        Format::Csv => {
            println!("degree,dim");
            for (i, d) in &r.dims {
                println!("{i},{d}");
            }
        }
        Format::Plain => {
            println!("xi: D^W offset {}, h^f [{}]", fmt_q(&r.dw_offset), qs(&hf).join(", "));
            for (i, d) in &r.dims {
                println!("H^{i} = {d}");
            }
            println!("stabilized at chain {} (started at {start})", r.chain);
        }
    }
    Ok(true)
}

const IDENTITIES: [&str; 4] = ["d^2", "(d^chi)^2", "(d^st)^2", "{d^chi,d^st}"];

fn verify(a: &VerifyArgs, format: Format) -> Result<bool> {
    let data = build_algebra(&a.algebra)?;
    let lam: AffineWeight = match &a.lambda {
        Some(s) => parse_lambda(&data, s)?,
        None => generic_lambda(&data),
    };
    let kind = which(&a.which)?;
    if a.depth == 0 {
        return Err(invalid("depth", "must be positive"));
    }
    let integrity = data.check_all();
    let cx = BrstComplex::new(HighestWeightModule::new(&data, lam.clone(), kind))?;
    let window = TruncationWindow::new(a.depth, a.depth, a.depth);
    let (status, states, failure): ([&str; 4], usize, Option<String>) =
        match verify_nilpotency(&cx, &window, &[-2, -1, 0, 1, 2]) {
            Ok(rep) => (["PASS"; 4], rep.states, None),
            Err(MiniwError::NilpotencyViolation(msg)) => {
                let failed = IDENTITIES.iter().position(|n| msg.starts_with(&format!("{n} "))).unwrap_or(0);
                let mut st = ["UNCHECKED"; 4];
                st[failed] = "FAIL";
                (st, 0, Some(msg))
            }
            Err(e) => return Err(e),
        };
    let ok = integrity.is_ok() && failure.is_none();
    match format {
        Format::Json => {
            let checks: serde_json::Map<String, Value> =
                IDENTITIES.iter().zip(status).map(|(n, s)| (format!("{n} = 0"), json!(s))).collect();
            println!(
                "{}",
                pretty(&json!({
                    "algebra": data.name,
                    "lambda": lam.to_string(),
                    "depth": a.depth,
                    "integrity": integrity.as_ref().map(|_| "PASS".to_string()).unwrap_or_else(|e| format!("FAIL: {e}")),
                    "nilpotency": checks,
                    "states": states,
                    "failure": failure,
                    "passed": ok,
                }))
            );
        }
        Format::Csv => {
            println!("check,status");
            println!("algebra integrity,{}", if integrity.is_ok() { "PASS" } else { "FAIL" });
            for (n, s) in IDENTITIES.iter().zip(status) {
                println!("\"{n} = 0\",{s}");
            }
        }
        Format::Plain => {
            match &integrity {
                Ok(()) => println!("algebra integrity: PASS"),
                Err(e) => println!("algebra integrity: FAIL ({e})"),
            }
            for (n, s) in IDENTITIES.iter().zip(status) {
                println!("{n} = 0: {s}");
            }
            match &failure {
                Some(m) => println!("failure: {m}"),
                None => println!("checked {states} states, depth {}", a.depth),
            }
        }
    }
    Ok(ok)
}

fn suite(a: &SuiteArgs, format: Format) -> Result<bool> {
    let ids: Vec<u32> = match &a.criteria {
        None => all_ids(),
        Some(s) => {
            let known = all_ids();
            s.split(',')
                .map(str::trim)
                .filter(|t| !t.is_empty())
                .map(|t| match t.parse::<u32>() {
                    Ok(i) if known.contains(&i) => Ok(i),
                    _ => Err(invalid("criteria", format!("unknown criterion {t:?}"))),
                })
                .collect::<Result<_>>()?
        }
    };
    let results = run_suite(&ids);
    let ok = results.iter().all(|r| r.passed);
    let v = serde_json::to_value(&results).expect("serializable");
    write_json(a.json.as_deref(), &v)?;
    match format {
        Format::Json => println!("{}", pretty(&v)),
        Format::Csv => {
            println!("id,name,status,seconds");
            for r in &results {
                println!("{},\"{}\",{},{:.3}", r.id, r.name, if r.passed { "PASS" } else { "FAIL" }, r.seconds);
            }
        }
        Format::Plain => {
            println!("{:>2}  {:<32}  {:<6}  detail", "#", "criterion", "status");
            for r in &results {
                println!("{:>2}  {:<32}  {:<6}  {}", r.id, r.name, if r.passed { "PASS" } else { "FAIL" }, r.detail);
            }
            let n = results.iter().filter(|r| r.passed).count();
            println!("{n}/{} passed", results.len());
        }
    }
    Ok(ok)
}
