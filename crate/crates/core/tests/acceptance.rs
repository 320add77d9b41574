//! Acceptance suite: one PASS/FAIL line per criterion, with timings.
//! Runs without the libtest harness so the report is always printed.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use hstair::cfweights::periodic_cf_value;
use hstair::classes::{check_diophantine, mu_at};
use hstair::cremona::{reduce, Verdict};
use hstair::echcap::{
    c_lower, c_lower_curve, cap_count, cap_quasipolynomial, ehr_quasipolynomial, ehrhart_count,
    ellipsoid_cap_direct, min_obstructing_index, path_table, toric_cap_direct, toric_caps,
    toric_caps_with_table, verify_b15,
};
use hstair::exactnum::{int, rat, Rational};
use hstair::staircase::{
    blocking_class, blocking_family_closed_form_u, blocking_interval_generic, dmin1_check,
    prestaircase_extension, prestaircase_generate, prestaircase_limits, recursion_holds,
    symmetry_apply,
};
use hstair::{Direction, Ending, ExClass, Family, RealValue, StairFamilySpec, Surd, Symmetry};
use num_bigint::BigInt;
use num_traits::ToPrimitive;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(t: Instant, limit: Duration, what: &str) -> Result<(), String> {
    let e = t.elapsed();
    ensure(e < limit, || {
        format!("{what} took {e:.2?}, limit {limit:?}")
    })
}

fn sr(r: Rational) -> Surd {
    Surd::from_rational(r)
}

fn c1_capacity_anchors() -> Outcome {
    let t = Instant::now();
    let c = toric_caps(&rat(1, 5), &int(5), 19).map_err(|e| e.to_string())?;
    within(t, Duration::from_secs(1), "toric_caps")?;
    ensure(c.caps[5] == int(10), || format!("c_5 = {}", c.caps[5]))?;
    ensure(c.caps[19] == int(24), || format!("c_19 = {}", c.caps[19]))?;
    Ok("c_5 = 10, c_19 = 24".into())
}

fn c2_quasipolynomials() -> Outcome {
    let t = Instant::now();
    let table = toric_caps(&rat(1, 5), &int(5), 6000).map_err(|e| e.to_string())?;
    ensure(*table.caps.last().unwrap() > int(500), || {
        "capacity table does not reach t = 500".into()
    })?;
    for t in 43..=500u64 {
        let n = cap_count(&table, &int(t as i64)).map_err(|e| e.to_string())?;
        ensure(int(n as i64) == cap_quasipolynomial(t), || {
            format!("cap({t}) = {n}, formula {}", cap_quasipolynomial(t))
        })?;
    }
    for t in 0..=500u64 {
        let n = ehrhart_count(&rat(1, 2), &rat(1, 12), t).map_err(|e| e.to_string())?;
        ensure(int(n as i64) == ehr_quasipolynomial(t), || {
            format!("ehr({t}) = {n}, formula {}", ehr_quasipolynomial(t))
        })?;
    }
    within(t, Duration::from_secs(30), "quasipolynomial checks")?;
    Ok(format!(
        "cap on [43, 500], ehr on [0, 500]; index origin k >= 0 (cap(48) = {})",
        cap_count(&table, &int(48)).unwrap()
    ))
}

fn c3_b15_claims() -> Outcome {
    let zs = [rat(601, 100), rat(121, 20), rat(6049, 1000)];
    let r = verify_b15(300, &zs).map_err(|e| e.to_string())?;
    ensure(r.slice_failures.is_empty(), || {
        format!("U/D failures: {:?}", r.slice_failures)
    })?;
    ensure(r.identity_failures.is_empty(), || {
        format!("identity failures: {:?}", r.identity_failures)
    })?;
    ensure(r.dtilde_mismatches.is_empty(), || {
        format!("dtilde mismatches: {:?}", r.dtilde_mismatches)
    })?;
    Ok(format!(
        "U <= D for t <= 300 at 3 samples, dtilde table on [43, 300] ({} checks)",
        r.checks
    ))
}

fn c4_embedding_anchors() -> Outcome {
    let t0 = toric_caps(&int(0), &int(1), 1000).map_err(|e| e.to_string())?;
    let v = c_lower(&Surd::from_int(5), &t0, 1000).map_err(|e| e.to_string())?;
    ensure(v.value == sr(rat(5, 2)), || {
        format!("c_lower(0, 5) = {}", v.value)
    })?;
    let t5 = toric_caps(&rat(1, 5), &int(1), 1000).map_err(|e| e.to_string())?;
    let v = c_lower(&Surd::from_int(6), &t5, 1000).map_err(|e| e.to_string())?;
    ensure(v.value == sr(rat(5, 2)), || {
        format!("c_lower(1/5, 6) = {}", v.value)
    })?;
    let t3 = toric_caps(&rat(3, 10), &int(1), 300).map_err(|e| e.to_string())?;
    let k = min_obstructing_index(&t3, 300).map_err(|e| e.to_string())?;
    ensure(k == Some(125), || {
        format!("min obstructing index at 3/10 is {k:?}")
    })?;
    Ok("c_lower = 5/2 twice, min index 125".into())
}

fn c5_cremona() -> Outcome {
    let mut exceptional: Vec<ExClass> = vec![
        "2,0;[1^5]".parse().unwrap(),
        "73,20;170/29".parse().unwrap(),
    ];
    let s = StairFamilySpec::new(Family::U, Direction::Upper, 0, Ending::Short).unwrap();
    exceptional.extend(
        prestaircase_generate(&s, 3)
            .unwrap()
            .iter()
            .map(|c| c.to_exclass()),
    );
    for n in 0..=5 {
        for f in [Family::U, Family::L, Family::E] {
            if let Ok(c) = blocking_class(f, n) {
                exceptional.push(c.to_exclass());
            }
        }
    }
    let mut slowest = Duration::ZERO;
    let mut check = |c: &ExClass, want_exceptional: bool| -> Result<(), String> {
        let t = Instant::now();
        let r = reduce(c, 100_000).map_err(|e| format!("{c}: {e}"))?;
        let e = t.elapsed();
        slowest = slowest.max(e);
        ensure(e < Duration::from_millis(100), || format!("{c} took {e:?}"))?;
        ensure(
            (r.verdict == Verdict::Exceptional) == want_exceptional,
            || format!("{c}: {:?}", r.verdict),
        )
    };
    for c in &exceptional {
        check(c, true)?;
    }
    check(&"48,14;111/19".parse().unwrap(), false)?;
    Ok(format!(
        "{} exceptional, 1 fake, slowest {slowest:.2?}",
        exceptional.len()
    ))
}

fn round4(x: &RealValue) -> f64 {
    (x.to_f64() * 1e4).round() / 1e4
}

fn c6_blocking() -> Outcome {
    for n in 0..=5 {
        let c = blocking_class(Family::U, n).unwrap();
        let g = blocking_interval_generic(&c).map_err(|e| e.to_string())?;
        ensure(g == blocking_family_closed_form_u(n), || {
            format!("B^U_{n}: generic and closed form differ")
        })?;
    }
    let j = blocking_interval_generic(&blocking_class(Family::U, 0).unwrap()).unwrap();
    ensure(
        j.z_low == RealValue::Exact(periodic_cf_value(&[], &[5, 1]).unwrap()),
        || format!("z_low = {}", j.z_low),
    )?;
    ensure(
        j.z_high == RealValue::Exact(periodic_cf_value(&[7], &[5, 1]).unwrap()),
        || format!("z_high = {}", j.z_high),
    )?;
    ensure(
        round4(&j.z_low) == 5.8541 && round4(&j.z_high) == 7.1708,
        || "decimal endpoints".into(),
    )?;
    Ok(format!(
        "n <= 5 exact; B^U_0 I = ({}, {})",
        j.z_low.to_decimal(6),
        j.z_high.to_decimal(6)
    ))
}

fn tuple(c: &hstair::QuasiPerfectClass) -> (i64, i64, i64, i64) {
    (
        c.d.to_i64().unwrap(),
        c.m.to_i64().unwrap(),
        c.p.to_i64().unwrap(),
        c.q.to_i64().unwrap(),
    )
}

fn c7_families() -> Outcome {
    let mut count = 0;
    for (f, d) in StairFamilySpec::kinds() {
        for end in [Ending::Short, Ending::Long] {
            for n in 0..=4 {
                let Ok(s) = StairFamilySpec::new(f, d, n, end) else {
                    continue;
                };
                let cs = prestaircase_generate(&s, 6).map_err(|e| format!("{s}: {e}"))?;
                ensure(
                    cs.iter().all(|c| check_diophantine(&c.to_exclass())),
                    || format!("{s}: non-Diophantine class"),
                )?;
                ensure(recursion_holds(&cs, &s.sigma()), || {
                    format!("{s}: recursion")
                })?;
                let lim = prestaircase_limits(&s).map_err(|e| format!("{s}: {e}"))?;
                ensure(lim.acc_verified, || format!("{s}: acc(M/D) != P/Q"))?;
                let (r, sd) = s.default_rs();
                ensure(
                    dmin1_check(&s, r, sd).map_err(|e| e.to_string())?.holds,
                    || format!("{s}: dmin1 at {r}/{sd}"),
                )?;
                count += 1;
            }
        }
    }
    let spec = |t: &str| t.parse::<StairFamilySpec>().unwrap();
    for n in 1..=4i64 {
        let c = prestaircase_generate(&spec(&format!("U:l:{n}:short")), 1).unwrap();
        let (n2, n3) = (n * n, n * n * n);
        ensure(tuple(&c[0]) == (n + 2, n + 1, 2 * n + 4, 1), || {
            format!("U/l seed n = {n}")
        })?;
        ensure(
            tuple(&c[1])
                == (
                    4 * n3 + 20 * n2 + 30 * n + 13,
                    4 * n3 + 16 * n2 + 18 * n + 5,
                    8 * n3 + 40 * n2 + 62 * n + 29,
                    4 * n2 + 10 * n + 5,
                ),
            || format!("U/l k = 1 seed n = {n}"),
        )?;
        let l = prestaircase_generate(&spec(&format!("L:l:{n}:short")), 0).unwrap();
        ensure(
            (tuple(&l[0]).0, tuple(&l[0]).1) == (10 * n2 + 25 * n + 13, 2 * n2 + 3 * n),
            || format!("L/l seed n = {n}"),
        )?;
        if n >= 2 {
            let ext = prestaircase_extension(&spec(&format!("L:u:{n}:short")))
                .unwrap()
                .unwrap();
            let want = (
                BigInt::from(5 * (n - 1)),
                BigInt::from(n - 2),
                BigInt::from(12 * n - 11),
                BigInt::from(2 * n - 2),
            );
            ensure((ext.d, ext.m, ext.p, ext.q) == want, || {
                format!("L/u k = -1 seed n = {n}")
            })?;
        }
    }
    let u = prestaircase_generate(&spec("U:u:0:short"), 1).unwrap();
    ensure(
        u.iter().map(tuple).collect::<Vec<_>>() == vec![(14, 9, 29, 4), (100, 63, 208, 29)],
        || "U/u n = 0 seeds".into(),
    )?;
    let e = spec("E:u:0:short");
    ensure(
        tuple(&prestaircase_generate(&e, 0).unwrap()[0]) == (73, 20, 170, 29),
        || "E/u n = 0 seed".into(),
    )?;
    ensure(
        dmin1_check(&e, 1, 3).unwrap().cross == BigInt::from(105),
        || "E/u n = 0 cross term".into(),
    )?;
    Ok(format!("{count} family specs, k <= 6, seeds verbatim"))
}

fn c8_ech_equality() -> Outcome {
    let mut triples = Vec::new();
    'outer: for (f, d) in StairFamilySpec::kinds() {
        for n in 0..=1 {
            let Ok(s) = StairFamilySpec::new(f, d, n, Ending::Short) else {
                continue;
            };
            for c in prestaircase_generate(&s, 1).unwrap() {
                let (lo, hi) = c.window();
                let b = Rational::new(c.m.clone(), c.d.clone());
                for i in [1, 2] {
                    triples.push((c.clone(), b.clone(), &lo + (&hi - &lo) * rat(i, 3)));
                    if triples.len() == 20 {
                        break 'outer;
                    }
                }
            }
        }
    }
    ensure(triples.len() == 20, || {
        format!("only {} triples", triples.len())
    })?;
    for (c, b, z) in &triples {
        let k = c.ech_index().to_u64().unwrap();
        let ratio = ellipsoid_cap_direct(z, k).unwrap() / toric_cap_direct(b, k).unwrap();
        let mu = mu_at(&c.to_exclass(), b, z).unwrap();
        ensure(ratio == mu, || {
            format!("{c} at b = {b}, z = {z}: ratio {ratio} vs mu {mu}")
        })?;
    }
    Ok("20 triples, ratio = mu exactly".into())
}

fn c9_symmetries() -> Outcome {
    let ap = |m: Symmetry, z: &Surd| symmetry_apply(m, z).map_err(|e| e.to_string());
    for i in 1..=100i64 {
        let z = sr(int(6) + rat(i * 7 + 3, i + 11));
        ensure(ap(Symmetry::Psi, &ap(Symmetry::Psi, &z)?)? == z, || {
            format!("Psi^2 at {z}")
        })?;
        ensure(ap(Symmetry::Phi, &ap(Symmetry::Phi, &z)?)? == z, || {
            format!("Phi^2 at {z}")
        })?;
        ensure(
            ap(Symmetry::Phi, &ap(Symmetry::Psi, &z)?)? == ap(Symmetry::Sh, &z)?,
            || format!("Phi Psi at {z}"),
        )?;
    }
    ensure(
        ap(Symmetry::Psi, &Surd::from_int(7))? == Surd::from_int(7),
        || "Psi(7)".into(),
    )?;
    ensure(
        ap(Symmetry::Phi, &Surd::from_int(7))? == sr(rat(41, 7)),
        || "Phi(7)".into(),
    )?;
    ensure(
        ap(Symmetry::Phi, &Surd::from_int(8))? == sr(rat(76, 13)),
        || "Phi(8)".into(),
    )?;
    for n in 0..=6i64 {
        let z = Surd::from_int(2 * n + 6);
        if n >= 1 {
            ensure(ap(Symmetry::Psi, &z)? == sr(rat(12 * n + 1, 2 * n)), || {
                format!("Psi center n = {n}")
            })?;
        }
        ensure(
            ap(Symmetry::Sh, &z)? == sr(rat(12 * n + 35, 2 * n + 6)),
            || format!("Sh center n = {n}"),
        )?;
    }
    Ok("involutions, composition and center maps exact".into())
}

fn c10_performance() -> Outcome {
    let start = Instant::now();
    let table = path_table(50_001);
    let t_table = start.elapsed();
    ensure(t_table < Duration::from_secs(30), || {
        format!("path table took {t_table:.2?}")
    })?;
    let t = Instant::now();
    let caps =
        toric_caps_with_table(&table, &rat(3, 10), &int(1), 25_000).map_err(|e| e.to_string())?;
    let t_caps = t.elapsed();
    ensure(t_caps < Duration::from_secs(5), || {
        format!("toric_caps took {t_caps:.2?}")
    })?;
    let k = min_obstructing_index(&caps, 25_000).map_err(|e| e.to_string())?;
    ensure(k == Some(125), || format!("min index {k:?}"))?;
    let third =
        toric_caps_with_table(&table, &rat(1, 3), &int(1), 25_000).map_err(|e| e.to_string())?;
    let none = min_obstructing_index(&third, 25_000).map_err(|e| e.to_string())?;
    ensure(none.is_none(), || format!("b = 1/3 obstructed at {none:?}"))?;
    let zs: Vec<Surd> = (0..=400).map(|i| sr(int(1) + rat(i, 50))).collect();
    let curve = c_lower_curve(&zs, &caps, 25_000).map_err(|e| e.to_string())?;
    ensure(curve.len() == zs.len(), || "short c_lower curve".into())?;
    let total = start.elapsed();
    ensure(total < Duration::from_secs(120), || {
        format!("pipeline took {total:.2?}")
    })?;
    Ok(format!(
        "path table {t_table:.2?}, caps {t_caps:.2?}, pipeline {total:.2?} (budget 120s)"
    ))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("capacity anchors", c1_capacity_anchors),
        ("quasipolynomial reproduction", c2_quasipolynomials),
        ("b = 1/5 finite-range claims", c3_b15_claims),
        ("embedding-function anchors", c4_embedding_anchors),
        ("Cremona verdicts", c5_cremona),
        ("blocking intervals", c6_blocking),
        ("family generation", c7_families),
        ("capacity ratio equals obstruction", c8_ech_equality),
        ("symmetries", c9_symmetries),
        ("performance", c10_performance),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()));
            Err(format!("panicked: {}", msg.unwrap_or_default()))
        });
        let e = t.elapsed();
        match outcome {
            Ok(detail) => println!("PASS {:>2} {name} [{e:.2?}]: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {:>2} {name} [{e:.2?}]: {why}", i + 1);
            }
        }
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
