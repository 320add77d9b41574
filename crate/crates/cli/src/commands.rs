use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use hstair::classes::{
    check_diophantine, classes_with_cf_in_range, find_dm_from_k, find_dm_from_pq, find_pq_from_dm,
    make_quasi_perfect, mu_at, volume_bound,
};
use hstair::cremona::{default_max_steps, reduce, Verdict};
use hstair::echcap::{
    c_lower_curve, ellipsoid_cap_direct, min_obstructing_index, toric_cap_direct, toric_caps,
    verify_b15,
};
use hstair::exactnum::{fmt_rational, int, rat, rational_decimal};
use hstair::staircase::{
    acc, acc_inv, blocking_class, blocking_interval_generic, dmin1_check, prestaircase_generate,
    prestaircase_limits, recursion_holds,
};
use hstair::{
    BlockingInterval, Branch, ContinuedFraction, ExClass, Family, Rational, RealValue,
    StairFamilySpec, Surd,
};
use num_bigint::BigInt;

use crate::capfile::CapacityFile;
use crate::curves::{emit_curve_csv, read_curve_csv, CurveSeries, SIG_DIGITS};
use crate::svg::{render_svg, Style};
use crate::{CheckFailed, Command, UsageError};

pub fn run(cmd: Command) -> Result<()> {
    match cmd {
        Command::Caps {
            b,
            scale,
            count,
            out,
        } => caps(&b, &scale, count, out.as_deref()),
        Command::EmbedLower {
            caps,
            zmin,
            zmax,
            step,
            out,
            with_volume,
            with_acc_curve,
        } => embed_lower(
            &caps,
            &grid(&zmin, &zmax, &step)?,
            &out,
            with_volume,
            with_acc_curve,
        ),
        Command::Obstruction {
            class,
            k,
            b,
            zmin,
            zmax,
            step,
            out,
        } => obstruction(class.as_deref(), k, &b, &grid(&zmin, &zmax, &step)?, &out),
        Command::Reduce { class, log } => reduce_cmd(&class, log),
        Command::FindClasses {
            k,
            cf,
            range,
            qmin,
            qmax,
        } => find_classes(k, cf.as_deref(), range.as_deref(), qmin, qmax),
        Command::Staircase { spec, kmax, verify } => staircase(&spec, kmax, verify),
        Command::Blocking { class, family, n } => blocking(class.as_deref(), family.as_deref(), n),
        Command::Acc { b } => acc_cmd(&b),
        Command::AccInv { z, branch } => {
            println!("{}", acc_inv(&z, branch)?);
            Ok(())
        }
        Command::MinObstructingK { b, caps } => min_obstructing(&b, &caps),
        Command::VerifyB15 { tmax, z } => {
            let report = verify_b15(tmax, &z)?;
            println!("{report}");
            if !report.passed() {
                return Err(CheckFailed("verification found mismatches".into()).into());
            }
            Ok(())
        }
        Command::Plot { inputs, out, style } => plot(&inputs, &out, style),
    }
}

/// `zmin, zmin + step, ...` up to `zmax`.
fn grid(zmin: &Rational, zmax: &Rational, step: &Rational) -> Result<Vec<Rational>> {
    if *step <= int(0) {
        return Err(UsageError("step must be positive".into()).into());
    }
    if zmin > zmax {
        return Err(UsageError("zmin exceeds zmax".into()).into());
    }
    let mut out = Vec::new();
    let mut z = zmin.clone();
    while z <= *zmax {
        out.push(z.clone());
        z += step;
    }
    Ok(out)
}

fn caps(b: &Rational, scale: &Rational, count: usize, out: Option<&Path>) -> Result<()> {
    let json = CapacityFile::from_table(&toric_caps(b, scale, count)?).to_json();
    match out {
        Some(p) => fs::write(p, json).with_context(|| format!("writing {}", p.display()))?,
        None => std::io::stdout().write_all(json.as_bytes())?,
    }
    Ok(())
}

fn decimal(s: &Surd) -> String {
    s.to_decimal(SIG_DIGITS)
}

fn embed_lower(
    caps: &Path,
    zs: &[Rational],
    out: &Path,
    with_volume: bool,
    with_acc_curve: bool,
) -> Result<()> {
    let table = CapacityFile::read(caps)?;
    if table.k_max() == 0 {
        return Err(UsageError("capacity file must hold at least c_1".into()).into());
    }
    let b = table.b.clone();
    let zsurd: Vec<Surd> = zs.iter().cloned().map(Surd::from_rational).collect();
    let lower = c_lower_curve(&zsurd, &table, table.k_max())?;
    let mut series = vec![CurveSeries {
        label: format!("c_lower b={}", fmt_rational(&b)),
        points: zs
            .iter()
            .cloned()
            .zip(lower.iter().map(|c| Some(decimal(&c.value))))
            .collect(),
    }];
    if with_volume {
        let bs = Surd::from_rational(b.clone());
        let mut pts = Vec::new();
        for (z, zsr) in zs.iter().zip(&zsurd) {
            let v = volume_bound(&bs, zsr)?;
            let root = Surd::new(
                int(0),
                int(1),
                v.squared().as_rational().expect("rational b and z").clone(),
            )?;
            pts.push((z.clone(), Some(decimal(&root))));
        }
        series.push(CurveSeries {
            label: "volume".into(),
            points: pts,
        });
    }
    if with_acc_curve {
        let branch = if b < rat(1, 3) { Branch::L } else { Branch::U };
        let pts = zs
            .iter()
            .map(|z| {
                let v = acc_inv(z, branch).ok().and_then(|bz| {
                    let den = (-bz).add_rational(&int(3));
                    Surd::from_rational(z + int(1)).try_div(&den).ok()
                });
                (z.clone(), v.map(|v| decimal(&v)))
            })
            .collect();
        series.push(CurveSeries {
            label: format!("acc {branch}"),
            points: pts,
        });
    }
    emit_curve_csv(&series, out)
}

fn parse_class(s: &str) -> Result<ExClass> {
    s.parse::<ExClass>()
        .map_err(|e| UsageError(format!("bad class {s:?}: {e}")).into())
}

fn obstruction(
    class: Option<&str>,
    k: Option<u64>,
    b: &Rational,
    zs: &[Rational],
    out: &Path,
) -> Result<()> {
    let series = match (class, k) {
        (Some(spec), _) => {
            let c = parse_class(spec)?;
            let pts = zs
                .iter()
                .map(|z| {
                    Ok((
                        z.clone(),
                        Some(rational_decimal(&mu_at(&c, b, z)?, SIG_DIGITS)),
                    ))
                })
                .collect::<Result<_>>()?;
            CurveSeries {
                label: c.to_string(),
                points: pts,
            }
        }
        (None, Some(k)) => {
            let cap = toric_cap_direct(b, k)?;
            if cap == int(0) {
                return Err(UsageError("k must be positive".into()).into());
            }
            let pts = zs
                .iter()
                .map(|z| {
                    Ok((
                        z.clone(),
                        Some(rational_decimal(
                            &(ellipsoid_cap_direct(z, k)? / &cap),
                            SIG_DIGITS,
                        )),
                    ))
                })
                .collect::<Result<_>>()?;
            CurveSeries {
                label: format!("c_{k} ratio"),
                points: pts,
            }
        }
        (None, None) => unreachable!("clap requires --class or --k"),
    };
    emit_curve_csv(&[series], out)
}

fn reduce_cmd(spec: &str, log: bool) -> Result<()> {
    let c = parse_class(spec)?;
    let r = reduce(&c, default_max_steps(&c))?;
    match &r.verdict {
        Verdict::Exceptional => println!("EXCEPTIONAL"),
        Verdict::Fake(why) => println!("FAKE\n{why}"),
    }
    if log {
        print!("{}", r.table());
    }
    Ok(())
}

fn print_centers(d: &BigInt, m: &BigInt, centers: &[(BigInt, BigInt)]) -> Result<()> {
    for (p, q) in centers {
        let c = make_quasi_perfect(d.clone(), m.clone(), p.clone(), q.clone())?;
        let cf = hstair::cfweights::rational_to_cf(&Rational::new(p.clone(), q.clone()))?;
        println!("{c}\t{cf}");
    }
    Ok(())
}

fn find_classes(
    k: Option<u64>,
    cf: Option<&str>,
    range: Option<&[Rational]>,
    qmin: Option<u64>,
    qmax: Option<u64>,
) -> Result<()> {
    if let Some(k) = k {
        for (d, m) in find_dm_from_k(k) {
            let (d, m) = (BigInt::from(d), BigInt::from(m));
            print_centers(&d, &m, &find_pq_from_dm(&d, &m))?;
        }
    } else if let Some(cf) = cf {
        let cf: ContinuedFraction = cf
            .parse()
            .map_err(|e| UsageError(format!("bad continued fraction: {e}")))?;
        let z = cf.value();
        for (d, m) in find_dm_from_pq(z.numer(), z.denom()) {
            print_centers(&d, &m, &[(z.numer().clone(), z.denom().clone())])?;
        }
    } else if let Some([lo, hi]) = range {
        let (qmin, qmax) = qmin.zip(qmax).expect("clap requires qmin and qmax");
        for r in classes_with_cf_in_range(lo, hi, qmin, qmax)? {
            print_centers(&r.d, &r.m, &[(r.p, r.q)])?;
        }
    }
    Ok(())
}

fn staircase(spec: &str, kmax: usize, verify: bool) -> Result<()> {
    let s: StairFamilySpec = spec
        .parse()
        .map_err(|e| UsageError(format!("bad family spec {spec:?}: {e}")))?;
    let classes = prestaircase_generate(&s, kmax)?;
    for (k, c) in classes.iter().enumerate() {
        println!("{k}\t{c}");
    }
    let lim = prestaircase_limits(&s)?;
    println!("b_inf\t{}\t{}", lim.b_inf, decimal(&lim.b_inf));
    println!("a_inf\t{}\t{}", lim.a_inf, decimal(&lim.a_inf));
    if !verify {
        return Ok(());
    }
    let mut failures = Vec::new();
    let dioph = classes.iter().all(|c| check_diophantine(&c.to_exclass()));
    let rec = recursion_holds(&classes, &s.sigma());
    let (r, sd) = s.default_rs();
    let dmin = dmin1_check(&s, r, sd)?;
    let mut cremona = true;
    for c in &classes {
        let e = c.to_exclass();
        if reduce(&e, default_max_steps(&e))?.verdict != Verdict::Exceptional {
            cremona = false;
            failures.push(format!("{c} is not exceptional"));
        }
    }
    for (name, ok) in [
        ("diophantine", dioph),
        ("recursion", rec),
        ("acc limit", lim.acc_verified),
        ("dmin1", dmin.holds),
        ("cremona", cremona),
    ] {
        println!("{name}\t{}", if ok { "ok" } else { "FAIL" });
        if !ok {
            failures.push(name.to_string());
        }
    }
    println!("dmin1 r/s = {r}/{sd}: |m1 d0 - m0 d1| = {}", dmin.cross);
    if failures.is_empty() {
        Ok(())
    } else {
        Err(CheckFailed(format!("checks failed: {}", failures.join(", "))).into())
    }
}

fn real(v: &RealValue) -> String {
    match v {
        RealValue::Exact(s) => format!("{s}\t{}", decimal(s)),
        RealValue::Approx { .. } => format!("{v}\t{}", v.to_decimal(SIG_DIGITS)),
    }
}

fn print_interval(j: &BlockingInterval) {
    println!("b_low\t{}", real(&j.b_low));
    println!("b_high\t{}", real(&j.b_high));
    println!("z_low\t{}", real(&j.z_low));
    println!("z_high\t{}", real(&j.z_high));
    println!("exact\t{}", j.exact);
}

fn blocking(class: Option<&str>, family: Option<&str>, n: Option<u32>) -> Result<()> {
    let c = match (class, family) {
        (Some(spec), _) => parse_class(spec)?
            .as_quasi_perfect()
            .ok_or_else(|| UsageError(format!("{spec} is not quasi-perfect")))?,
        (None, Some(f)) => {
            let f: Family = f.parse().map_err(|e| UsageError(format!("{e}")))?;
            blocking_class(f, n.expect("clap requires --n"))?
        }
        (None, None) => unreachable!("clap requires --class or --family"),
    };
    println!("class\t{c}");
    print_interval(&blocking_interval_generic(&c)?);
    Ok(())
}

fn acc_cmd(b: &Rational) -> Result<()> {
    let v = acc(&Surd::from_rational(b.clone()))?;
    println!("{v}");
    if !matches!(&v, RealValue::Exact(s) if s.is_rational()) {
        println!("{}", v.to_decimal(SIG_DIGITS));
    }
    Ok(())
}

fn min_obstructing(b: &Rational, caps: &Path) -> Result<()> {
    let table = CapacityFile::read(caps)?;
    if table.b != *b {
        return Err(UsageError(format!(
            "capacity file is for b = {}, not {}",
            fmt_rational(&table.b),
            fmt_rational(b)
        ))
        .into());
    }
    match min_obstructing_index(&table, table.k_max())? {
        Some(k) => println!("{k}"),
        None => println!("none"),
    }
    Ok(())
}

fn plot(inputs: &[PathBuf], out: &Path, style: Style) -> Result<()> {
    let mut cols = Vec::new();
    for p in inputs {
        cols.extend(read_curve_csv(p)?);
    }
    let svg = render_svg(&cols, style).ok_or_else(|| UsageError("no data to plot".into()))?;
    fs::write(out, svg).with_context(|| format!("writing {}", out.display()))?;
    Ok(())
}
