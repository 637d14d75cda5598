//! Acceptance run: one PASS/FAIL line per criterion, non-zero exit if any
//! criterion fails or exceeds its time budget.

use std::process::{Command, Output};
use std::time::{Duration, Instant};

use ffhyper::audit::{self, Format, Provenance, Status};
use ffhyper::chars::{self, Character};
use ffhyper::curves::{self, GeneralHuffParams, Model, WeierstrassABParams};
use ffhyper::cyclo::format_rat;
use ffhyper::hyp::{self, HypSeries, TwoF1};
use ffhyper::{ff, Exec, FieldCtx, Rat};

type Check = Result<String, String>;
type Criterion = (&'static str, u64, fn() -> Check);

fn field(q: u64) -> FieldCtx {
    let (p, r) = ff::odd_prime_power(q).expect("odd prime power");
    FieldCtx::new(p, r).expect("field within cap")
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn ffhyper(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ffhyper"))
        .args(args)
        .env_remove("FFHYP_QMAX")
        .output()
        .expect("binary runs")
}

fn rat_str(r: &Rat) -> String {
    format_rat(r)
}

fn laws() -> Check {
    let qs = [3, 5, 7, 9, 11, 13, 25, 27, 49];
    let mut cases = 0;
    for q in qs {
        let ctx = field(q);
        for law in chars::laws::run_all(&ctx, 2024, Exec::default()) {
            cases += law.cases;
            ensure(law.holds(), || {
                format!(
                    "{} over F_{q}: {} failures, first {:?}",
                    law.name, law.failures, law.first_failure
                )
            })?;
        }
    }
    Ok(format!("11 laws x {} fields, {cases} cases", qs.len()))
}

fn cross_models() -> Check {
    let mut pairs = 0;
    for q in ff::odd_prime_powers(49) {
        let ctx = field(q);
        let exec = Exec::default();
        let weier = curves::count_grid(&ctx, Model::Weierstrass, exec);
        let ghuff = curves::count_grid(&ctx, Model::GeneralHuff, exec);
        ensure(weier.len() == ghuff.len(), || {
            format!("F_{q}: grid sizes differ")
        })?;
        for ((a, b, g), (_, _, e)) in ghuff.iter().zip(&weier) {
            ensure(g.total == e.total, || {
                format!("F_{q}: |G| != |E| at {a:?},{b:?}")
            })?;
            let quartic = curves::count_general_huff_quartic(
                &ctx,
                GeneralHuffParams::new(&ctx, *a, *b).unwrap(),
            );
            ensure(quartic.total == g.total, || {
                format!("F_{q}: quartic count differs at {a:?},{b:?}")
            })?;
        }
        for (a, b, h) in curves::count_grid(&ctx, Model::Huff, exec) {
            let g = curves::count(&ctx, Model::GeneralHuff, ctx.square(a), ctx.square(b)).unwrap();
            ensure(h.total == g.total, || {
                format!("F_{q}: |H_(a,b)| != |G_(a^2,b^2)|")
            })?;
        }
        pairs += ghuff.len();
    }
    let anchor = |q: u64, m: Model, a: i64, b: i64| {
        let ctx = field(q);
        curves::count(&ctx, m, ctx.from_int(a), ctx.from_int(b))
            .unwrap()
            .total
    };
    let anchors = [
        (anchor(5, Model::GeneralHuff, 1, 4), 8),
        (anchor(5, Model::Huff, 1, 2), 8),
        (anchor(7, Model::Huff, 1, 2), 8),
        (anchor(5, Model::Weierstrass, 2, 4), 4),
    ];
    ensure(anchors.iter().all(|(got, want)| got == want), || {
        format!("anchors {anchors:?}")
    })?;
    Ok(format!("{pairs} (a,b) pairs, 4 anchors"))
}

fn two_f_one_vs_counts() -> Check {
    let mut points = 0;
    for q in ff::odd_prime_powers(49) {
        let ctx = field(q);
        let f = TwoF1::new(&ctx, Exec::default()).eval_all(&ctx, Exec::default());
        for l in ctx.elements().filter(|&l| !l.is_zero() && l != ctx.one()) {
            let e = curves::count_weierstrass(
                &ctx,
                WeierstrassABParams::new(&ctx, ctx.one(), l).unwrap(),
            );
            let want = Rat::new((e.total as i64 - q as i64 - 1).into(), (q as i64).into());
            ensure(f[l.index() as usize] == want, || {
                format!("F_{q} at {}", ctx.format_element(l))
            })?;
            points += 1;
        }
    }
    let at = |p: u64, l: i64| {
        let ctx = field(p);
        rat_str(&hyp::two_f_one(&ctx, ctx.from_int(l)))
    };
    let anchors = [
        (at(5, -1), "2/5"),
        (at(13, 2), "-6/13"),
        (at(13, 4), "2/13"),
        (at(7, -1), "0/1"),
    ];
    ensure(anchors.iter().all(|(g, w)| g == w), || {
        format!("anchors {anchors:?}")
    })?;
    Ok(format!("{points} points, 4 anchors"))
}

fn greene() -> Check {
    let mut points = 0;
    for q in ff::odd_prime_powers(25) {
        let ctx = field(q);
        let phi = Character::quadratic(&ctx);
        let eps = Character::trivial(&ctx);
        let f = HypSeries::new(&ctx, &[phi, phi], &[eps], Exec::default()).unwrap();
        let g = HypSeries::new(&ctx, &[phi, eps], &[phi], Exec::default()).unwrap();
        let sign = |x| Rat::from_integer(chi(&ctx, x).into());
        let m1 = sign(ctx.minus_one());
        let one = ctx.one();
        for l in ctx.elements() {
            let fl = f.eval(&ctx, l).unwrap();
            if !l.is_zero() && l != one {
                let refl = &m1 * f.eval(&ctx, ctx.sub(one, l)).unwrap();
                ensure(fl == refl, || format!("generic reflection F_{q}"))?;
                let g316 = -&m1 * (Rat::from_integer(1.into()) + sign(l))
                    / Rat::from_integer((q as i64).into());
                ensure(g.eval(&ctx, l).unwrap() == g316, || {
                    format!("generic G-316 F_{q}")
                })?;
            }
            if l != one {
                let x = ctx.div(l, ctx.sub(l, one)).unwrap();
                let ratio = sign(ctx.sub(one, l)) * f.eval(&ctx, x).unwrap();
                ensure(fl == ratio, || format!("generic ratio F_{q}"))?;
            }
            points += 1;
        }
    }
    let ids = ["G-reflect", "G-ratio", "G-316"].map(|id| audit::lookup(id).unwrap());
    let reports = audit::audit_many(&ids, &ff::odd_prime_powers(49), &Default::default()).unwrap();
    for r in &reports {
        ensure(r.status == Status::Pass, || {
            format!("{} failed {} points", r.identity, r.failures)
        })?;
    }
    let spec: usize = reports.iter().map(|r| r.records.len()).sum();
    Ok(format!(
        "{points} generic points (q <= 25), {spec} specialised points (q <= 49)"
    ))
}

fn chi(ctx: &FieldCtx, x: ff::FieldElement) -> i64 {
    match (x.is_zero(), ctx.is_square(x)) {
        (true, _) => 0,
        (false, true) => 1,
        (false, false) => -1,
    }
}

fn ono() -> Check {
    let primes: Vec<u64> = (3..=229).filter(|&p| ff::is_prime(p)).collect();
    for &p in &primes {
        let ctx = field(p);
        let v = hyp::two_f_one(&ctx, ctx.minus_one());
        if p % 4 == 1 {
            let ts = hyp::cornacchia(p).map_err(|e| e.to_string())?;
            ensure(ts.x * ts.x + ts.y * ts.y == p && ts.x % 2 == 1, || {
                format!("cornacchia({p})")
            })?;
            let (x, y) = (ts.x as i64, ts.y as i64);
            let f = hyp::ono_formula(x, y, p);
            ensure(v == f, || {
                format!("p={p}: {} vs {}", rat_str(&v), rat_str(&f))
            })?;
            for (sx, sy) in [(1, 1), (1, -1), (-1, 1), (-1, -1)] {
                ensure(hyp::ono_formula(sx * x, sy * y, p) == f, || {
                    format!("p={p}: sign choice ({sx},{sy})")
                })?;
            }
        } else {
            ensure(v == Rat::from_integer(0.into()), || {
                format!("p={p}: {} != 0", rat_str(&v))
            })?;
        }
    }
    Ok(format!("{} primes", primes.len()))
}

fn printed_regression() -> Check {
    let out = ffhyper(&[
        "audit",
        "--all",
        "--qmax",
        "13",
        "--provenance",
        "printed",
        "--format",
        "json",
    ]);
    ensure(out.status.code() == Some(3), || {
        format!("exit code {:?}", out.status.code())
    })?;
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).map_err(|e| e.to_string())?;
    let rows = v.as_array().ok_or("top level is not an array")?;
    let str_fields = ["lhs", "rhs", "residual"];
    for row in rows {
        let ok = row["identity"].is_string()
            && if row.get("summary").is_some() {
                row["status"].is_string() && row["points"].is_u64() && row["failures"].is_u64()
            } else {
                row["q"].is_u64()
                    && row["pass"].is_boolean()
                    && str_fields.iter().all(|k| row[k].is_string())
            };
        ensure(ok, || format!("malformed row {row}"))?;
    }
    for id in ["T4.1", "C4.2", "C5.1", "T5.2a", "T5.2b", "T5.2c"] {
        let fail = rows
            .iter()
            .any(|r| r["identity"] == id && r["summary"] == true && r["status"] == "FAIL");
        ensure(fail, || format!("{id} did not report FAIL"))?;
    }
    let find = |id: &str, q: u64, key: &[(&str, u64)]| {
        rows.iter()
            .find(|r| r["identity"] == id && r["q"] == q && key.iter().all(|(k, v)| r[*k] == *v))
            .cloned()
            .ok_or_else(|| format!("{id} record at q={q} {key:?} missing"))
    };
    let checks = [
        (
            find("T4.1", 5, &[("a", 1), ("b", 4)])?,
            ["8/1", "7/1", "1/1"],
        ),
        (
            find("T4.1", 5, &[("a", 1), ("b", 2)])?,
            ["8/1", "23/2", "-7/2"],
        ),
        (
            find("C4.2", 5, &[("a", 1), ("b", 2)])?,
            ["8/1", "7/1", "1/1"],
        ),
        (
            find("T5.2b", 13, &[("lambda", 2)])?,
            ["2/13", "38/169", "-12/169"],
        ),
    ];
    for (row, want) in &checks {
        let got = str_fields.map(|k| row[k].as_str().unwrap_or_default().to_string());
        ensure(got == *want, || format!("{row} expected {want:?}"))?;
    }
    Ok(format!("{} rows, 4 fixed residuals, exit 3", rows.len()))
}

fn corrected() -> Check {
    let cfg = audit::AuditConfig::default();
    let small = ["C1", "C2", "C3", "C4a", "C4b", "C4c"].map(|id| audit::lookup(id).unwrap());
    let mut points = 0;
    let mut run = |ids: &[&'static audit::Identity], qs: &[u64]| -> Result<(), String> {
        for r in audit::audit_many(ids, qs, &cfg).map_err(|e| e.to_string())? {
            ensure(r.status == Status::Pass && !r.records.is_empty(), || {
                format!("{}: {} failures", r.identity, r.failures)
            })?;
            points += r.records.len();
        }
        Ok(())
    };
    run(&small, &ff::odd_prime_powers(49))?;
    run(&small[..2], &[53, 59, 61, 67, 71, 73, 79, 81])?;
    let primes: Vec<u64> = (5..=229)
        .filter(|&p| ff::is_prime(p) && p % 4 == 1)
        .collect();
    run(&[audit::lookup("C5.3").unwrap()], &primes)?;
    Ok(format!("{points} points"))
}

fn determinism() -> Check {
    let runs: [&[&str]; 5] = [
        &["audit", "--all", "--qmax", "13", "--format", "json"],
        &["audit", "--all", "--qmax", "13", "--format", "csv"],
        &["eval2f1", "--p", "49", "--lambda", "3"],
        &["special", "--p", "229"],
        &["laws", "--p", "3", "--r", "3", "--seed", "7"],
    ];
    for args in runs {
        let (a, b) = (ffhyper(args), ffhyper(args));
        ensure(
            a.stdout == b.stdout && a.status.code() == b.status.code(),
            || format!("{args:?} differs"),
        )?;
    }
    let seq = ffhyper(&["audit", "--all", "--qmax", "25", "--jobs", "1"]);
    let par = ffhyper(&["audit", "--all", "--qmax", "25", "--jobs", "4"]);
    ensure(seq.stdout == par.stdout, || {
        "--jobs 1 and --jobs 4 differ".into()
    })?;
    let emit = |exec| {
        let cfg = audit::AuditConfig {
            exec,
            ..Default::default()
        };
        let mut out = Vec::new();
        audit::emit(
            &audit::sweep_with(13, Some(Provenance::Corrected), &cfg).unwrap(),
            Format::Csv,
            &mut out,
        )
        .unwrap();
        out
    };
    ensure(emit(Exec::Sequential) == emit(Exec::Parallel), || {
        "library sweep differs across modes".into()
    })?;
    Ok("CLI repeats, --jobs 1 vs 4, library sequential vs parallel".into())
}

fn main() {
    let criteria: [Criterion; 8] = [
        ("character-sum laws", 60, laws),
        ("oracle cross-consistency", 120, cross_models),
        ("2F1 engine vs curve oracle", 120, two_f_one_vs_counts),
        ("Greene transformations", 120, greene),
        ("Ono special values", 300, ono),
        ("printed-identity regression", 300, printed_regression),
        ("corrected identities", 300, corrected),
        ("determinism", 300, determinism),
    ];
    let mut failed = 0;
    for (i, (name, budget, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = check();
        let took = start.elapsed();
        let line = match result {
            Ok(detail) if took <= Duration::from_secs(*budget) => format!("PASS  {detail}"),
            Ok(detail) => format!("FAIL  over budget {budget}s: {detail}"),
            Err(e) => format!("FAIL  {e}"),
        };
        if line.starts_with("FAIL") {
            failed += 1;
        }
        println!(
            "criterion {} {name:<28} {line} [{:.1}s]",
            i + 1,
            took.as_secs_f64()
        );
    }
    println!(
        "acceptance: {}/{} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
