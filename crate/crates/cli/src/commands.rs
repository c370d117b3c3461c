use std::f64::consts::PI;
use std::fs::File;
use std::io::{self, BufWriter, Write};

use anyhow::{bail, Context, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::Value;

use s2re_core::meridian::{candidate_from, euler_limit_check, sweep_counts, SweepPoint};
use s2re_core::{
    angular_momentum, find_meridian_rotators, integrate, re_residuals, solve_equator, EquatorError,
    IntegrateOptions, MassTriple, ReCandidate, SpherePoint, SphereRadius,
};

use crate::config::{
    default_a_range, default_nu_range, Cli, Command, CommonArgs, Format, Potential, PotentialKind,
    SweepArgs, VerifyArgs,
};
use crate::records::{
    EquatorRecord, EulerReport, EulerRow, MeridianRecord, SweepRecord, SweepReport, VerifyRecord,
};

/// How a successful run ended; mapped to the process exit code.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Solved,
    NoSolution,
    VerificationFailed,
}

pub fn run(cli: &Cli) -> Result<Status> {
    let c = &cli.common;
    match &cli.command {
        Command::Equator => equator(c),
        Command::Meridian { a } => meridian(c, *a),
        Command::Sweep(args) => sweep(c, args),
        Command::Verify(args) => verify(c, args),
        Command::EulerLimit { radii, r21 } => euler_limit(c, radii, *r21),
    }
}

fn sink(c: &CommonArgs) -> Result<Box<dyn Write>> {
    Ok(match &c.out {
        Some(path) => Box::new(BufWriter::new(
            File::create(path).with_context(|| format!("cannot create {}", path.display()))?,
        )),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn write_json<T: Serialize + ?Sized>(c: &CommonArgs, value: &T) -> Result<()> {
    let mut out = sink(c)?;
    serde_json::to_writer_pretty(&mut out, value)?;
    writeln!(out)?;
    out.flush()?;
    Ok(())
}

/// Full double precision, 17 significant digits.
fn num(v: f64) -> String {
    format!("{v:.16e}")
}

fn opt_num(v: Option<f64>) -> String {
    v.map(num).unwrap_or_default()
}

fn write_csv(
    c: &CommonArgs,
    header: &[&str],
    rows: &[Vec<String>],
    footer: &[Vec<String>],
) -> Result<()> {
    let mut out = sink(c)?;
    {
        let mut w = csv::WriterBuilder::new()
            .flexible(true)
            .from_writer(&mut out);
        w.write_record(header)?;
        for r in rows {
            w.write_record(r)?;
        }
        for f in footer {
            let mut rec = vec![format!("# {}", f[0])];
            rec.extend(f[1..].iter().cloned());
            w.write_record(&rec)?;
        }
        w.flush()?;
    }
    out.flush()?;
    Ok(())
}

fn equator(c: &CommonArgs) -> Result<Status> {
    let masses = c.masses()?;
    let radius = c.sphere();
    let kind = c.potential_kind();
    let pot = Potential::new(kind, radius);
    let record = match solve_equator(&masses, radius) {
        Ok(sol) => {
            let residual = re_residuals(&sol.candidate(0.0), &masses, pot.as_dyn())?.max_norm();
            EquatorRecord::solved(&sol, &masses, kind.as_str(), residual)
        }
        Err(EquatorError::NoSolution { region, violated }) => EquatorRecord::missing(
            &masses,
            radius.get(),
            kind.as_str(),
            &region.to_string(),
            violated,
        ),
        Err(e) => return Err(e.into()),
    };
    match c.format {
        Format::Json => write_json(c, &record)?,
        Format::Csv => {
            let m = masses.as_array();
            let d = record.dphi.map(|d| d.map(Some)).unwrap_or([None; 3]);
            let row = vec![
                num(m[0]),
                num(m[1]),
                num(m[2]),
                record.region.clone(),
                opt_num(d[0]),
                opt_num(d[1]),
                opt_num(d[2]),
                opt_num(record.rho),
                opt_num(record.neg_potential_energy),
                opt_num(record.residual),
            ];
            let header = [
                "m1",
                "m2",
                "m3",
                "region",
                "dphi12",
                "dphi23",
                "dphi31",
                "rho",
                "neg_potential_energy",
                "residual",
            ];
            write_csv(c, &header, &[row], &[])?;
        }
    }
    if !record.exists {
        eprintln!("no equator solution: {}", record.region);
        return Ok(Status::NoSolution);
    }
    Ok(Status::Solved)
}

const MERIDIAN_HEADER: [&str; 11] = [
    "a",
    "nu1",
    "nu2",
    "region",
    "x",
    "theta1",
    "theta2",
    "theta3",
    "s",
    "omega_squared",
    "residual",
];

fn meridian(c: &CommonArgs, a: f64) -> Result<Status> {
    let masses = c.masses()?;
    let radius = c.sphere();
    let kind = c.potential_kind();
    let pot = Potential::new(kind, radius);
    let sols = find_meridian_rotators(a, &masses, pot.as_dyn(), &c.scan_options())?;
    let records: Vec<MeridianRecord> = sols
        .iter()
        .map(|s| MeridianRecord::new(s, &masses, radius.get(), kind.as_str()))
        .collect();
    match c.format {
        Format::Json => write_json(c, &records)?,
        Format::Csv => {
            let rows: Vec<Vec<String>> = records
                .iter()
                .map(|r| {
                    vec![
                        num(r.a),
                        num(masses.nu1()),
                        num(masses.nu2()),
                        r.region.clone(),
                        num(r.x),
                        num(r.theta[0]),
                        num(r.theta[1]),
                        num(r.theta[2]),
                        r.s.map(|s| s.to_string()).unwrap_or_default(),
                        opt_num(r.omega_squared),
                        num(r.residual),
                    ]
                })
                .collect();
            write_csv(c, &MERIDIAN_HEADER, &rows, &[])?;
        }
    }
    Ok(if records.is_empty() {
        Status::NoSolution
    } else {
        Status::Solved
    })
}

fn sweep_points(c: &CommonArgs, args: &SweepArgs) -> Vec<SweepPoint> {
    let nu_range = args.nu_range.unwrap_or_else(default_nu_range);
    if let Some(n) = args.random {
        let mut rng = ChaCha8Rng::seed_from_u64(c.seed);
        let (lo, hi) = (nu_range.lo.ln(), nu_range.hi.ln());
        return (0..n)
            .map(|_| SweepPoint {
                a: rng.gen_range(1e-3..PI - 1e-3),
                nu1: rng.gen_range(lo..=hi).exp(),
                nu2: rng.gen_range(lo..=hi).exp(),
            })
            .collect();
    }
    let a_values = match (&args.a_values, args.a_range) {
        (Some(v), _) => v.clone(),
        (None, Some(r)) => r.values(false),
        (None, None) => default_a_range().values(false),
    };
    let nu_values = match &args.nu_values {
        Some(v) => v.clone(),
        None => nu_range.values(args.nu_log || args.nu_range.is_none()),
    };
    let mut points = Vec::with_capacity(a_values.len() * nu_values.len().pow(2));
    for &a in &a_values {
        for &nu1 in &nu_values {
            for &nu2 in &nu_values {
                points.push(SweepPoint { a, nu1, nu2 });
            }
        }
    }
    points
}

/// Counts depend on neither R nor the sign of the potential, so the sweep
/// always runs on the unit sphere with the attractive potential.
fn sweep(c: &CommonArgs, args: &SweepArgs) -> Result<Status> {
    let points = sweep_points(c, args);
    if points.is_empty() {
        bail!("empty sweep grid");
    }
    let opts = s2re_core::ScanOptions {
        samples_per_region: args.samples.max(2),
        ..c.scan_options()
    };
    let rows: Vec<SweepRecord> = sweep_counts(&points, &opts)
        .into_iter()
        .map(|r| SweepRecord {
            a: r.point.a,
            nu1: r.point.nu1,
            nu2: r.point.nu2,
            count: r.counts.total(),
            counts: r.counts.0,
        })
        .collect();
    if rows.len() < points.len() {
        eprintln!("skipped {} invalid grid points", points.len() - rows.len());
    }
    let max_count = rows.iter().map(|r| r.count).max().unwrap_or(0);
    match c.format {
        Format::Json => write_json(c, &SweepReport { rows, max_count })?,
        Format::Csv => {
            let header = [
                "a",
                "nu1",
                "nu2",
                "count",
                "count_I",
                "count_II",
                "count_III",
                "count_IV",
            ];
            let body: Vec<Vec<String>> = rows
                .iter()
                .map(|r| {
                    let mut v = vec![num(r.a), num(r.nu1), num(r.nu2), r.count.to_string()];
                    v.extend(r.counts.iter().map(|k| k.to_string()));
                    v
                })
                .collect();
            write_csv(
                c,
                &header,
                &body,
                &[vec!["max_count".into(), max_count.to_string()]],
            )?;
        }
    }
    Ok(Status::Solved)
}

fn euler_limit(c: &CommonArgs, radii: &[f64], r21: f64) -> Result<Status> {
    let masses = c.masses.unwrap_or_else(MassTriple::equal);
    if radii.is_empty() || radii.windows(2).any(|w| !(w[0] < w[1])) || radii[0] <= 0.0 {
        bail!("--radii must be positive and strictly ascending");
    }
    let rep = euler_limit_check(&masses, r21, radii)?;
    let report = EulerReport {
        masses: masses.as_array(),
        r21,
        quintic: rep.quintic,
        positive_root: rep.positive_root,
        rows: rep
            .rows
            .iter()
            .map(|r| EulerRow {
                radius: r.radius,
                a: r.a,
                coefficients: r.coefficients,
                max_coeff_deviation: r.max_coeff_deviation,
                root_lambda: r.root_lambda,
                root_deviation: r.root_deviation,
            })
            .collect(),
        orders: rep.orders.clone(),
        order: rep.mean_order(),
    };
    match c.format {
        Format::Json => write_json(c, &report)?,
        Format::Csv => {
            let header = [
                "R",
                "a",
                "max_coeff_deviation",
                "root_lambda",
                "root_deviation",
            ];
            let body: Vec<Vec<String>> = report
                .rows
                .iter()
                .map(|r| {
                    vec![
                        num(r.radius),
                        num(r.a),
                        num(r.max_coeff_deviation),
                        num(r.root_lambda),
                        num(r.root_deviation),
                    ]
                })
                .collect();
            let mut quintic = vec!["quintic".to_string()];
            quintic.extend(report.quintic.iter().map(|v| num(*v)));
            let footer = vec![
                vec!["order".into(), opt_num(report.order)],
                vec!["positive_root".into(), num(report.positive_root)],
                quintic,
            ];
            write_csv(c, &header, &body, &footer)?;
        }
    }
    Ok(Status::Solved)
}

/// One configuration to verify, with its antipodal partner when recorded.
struct Entry {
    kind: String,
    masses: MassTriple,
    radius: SphereRadius,
    potential: PotentialKind,
    lifts: Vec<ReCandidate>,
    recorded_residual: Option<f64>,
}

fn field<'a>(v: &'a Value, name: &str) -> Option<&'a Value> {
    v.get(name).filter(|x| !x.is_null())
}

fn triple(v: &Value, name: &str) -> Result<Option<[f64; 3]>> {
    field(v, name)
        .map(|x| {
            serde_json::from_value::<[f64; 3]>(x.clone()).with_context(|| format!("field {name:?}"))
        })
        .transpose()
}

fn parse_entry(c: &CommonArgs, args: &VerifyArgs, v: &Value, index: usize) -> Result<Entry> {
    let masses = match (c.masses, triple(v, "masses")?) {
        (Some(m), _) => m,
        (None, Some(m)) => MassTriple::new(m[0], m[1], m[2])?,
        (None, None) => bail!("entry {index}: no masses in the file and no --masses"),
    };
    let radius = match c.radius {
        Some(r) => r,
        None => field(v, "radius").and_then(Value::as_f64).unwrap_or(1.0),
    };
    let radius = SphereRadius::new(radius)?;
    let potential = match c.potential {
        Some(p) => p,
        None => match field(v, "potential").and_then(Value::as_str) {
            Some(s) => PotentialKind::parse(s)
                .with_context(|| format!("entry {index}: unknown potential {s:?}"))?,
            None => PotentialKind::Cotangent,
        },
    };
    let recorded_residual = field(v, "residual").and_then(Value::as_f64);
    let (kind, lifts) = if let Some(theta) = triple(v, "theta")? {
        let w2 = field(v, "omega_squared")
            .and_then(Value::as_f64)
            .unwrap_or(0.0);
        if !(w2 >= 0.0) {
            bail!("entry {index}: omega_squared must be non-negative");
        }
        let w = w2.sqrt();
        let mut lifts = vec![candidate_from(theta, w)];
        if let Some(alt) = triple(v, "theta_alt")? {
            lifts.push(candidate_from(alt, w));
        }
        ("meridian", lifts)
    } else if let Some(points) = field(v, "points") {
        let pts: [[f64; 2]; 3] =
            serde_json::from_value(points.clone()).context("field \"points\"")?;
        let cand = ReCandidate {
            points: pts.map(|[t, p]| SpherePoint::new(t, p)),
            omega: args.omega,
        };
        ("equator", vec![cand])
    } else {
        bail!("entry {index}: neither \"theta\" nor \"points\" present");
    };
    Ok(Entry {
        kind: kind.into(),
        masses,
        radius,
        potential,
        lifts,
        recorded_residual,
    })
}

fn verify_entry(
    entry: &Entry,
    index: usize,
    c: &CommonArgs,
    args: &VerifyArgs,
) -> Result<VerifyRecord> {
    let pot = Potential::new(entry.potential, entry.radius);
    let tol = c.tol_residual;
    let mut residual = 0.0f64;
    let mut residual_pass = true;
    let (mut cx, mut cy, mut c_scale) = (0.0f64, 0.0f64, 0.0f64);
    for lift in &entry.lifts {
        let r = re_residuals(lift, &entry.masses, pot.as_dyn())?;
        residual = residual.max(r.max_norm());
        residual_pass &= r.within(tol);
        let l = angular_momentum(&lift.state(entry.radius), &entry.masses);
        cx = cx.max(l.cx.abs());
        cy = cy.max(l.cy.abs());
        c_scale = c_scale.max(l.norm());
    }
    let momentum_pass = cx.max(cy) <= tol * c_scale.max(1.0);

    let first = entry.lifts[0];
    let period = if first.omega > 0.0 {
        2.0 * PI / first.omega
    } else {
        10.0
    };
    let opts = IntegrateOptions::period(period, args.steps.max(1));
    let (drift, integration_error) = match integrate(
        &first.state(entry.radius),
        &entry.masses,
        pot.as_dyn(),
        opts,
    ) {
        Ok(t) => (t.drift, None),
        Err(e) => (e.partial.drift, Some(e.to_string())),
    };
    let drift_pass = integration_error.is_none()
        && drift.max_arc_drift < args.tol_drift
        && drift.momentum_rel_drift < 1e-8;
    Ok(VerifyRecord {
        index,
        kind: entry.kind.clone(),
        omega: first.omega,
        residual,
        recorded_residual: entry.recorded_residual,
        residual_pass,
        cx,
        cy,
        momentum_pass,
        period,
        sigma_drift: drift.max_arc_drift,
        momentum_drift: drift.momentum_rel_drift,
        integration_error,
        drift_pass,
        pass: residual_pass && momentum_pass && (drift_pass || !args.require_drift),
    })
}

fn verify(c: &CommonArgs, args: &VerifyArgs) -> Result<Status> {
    let text = std::fs::read_to_string(&args.file)
        .with_context(|| format!("cannot read {}", args.file.display()))?;
    let value: Value = serde_json::from_str(&text)
        .with_context(|| format!("{} is not valid JSON", args.file.display()))?;
    let items = match value {
        Value::Array(items) => items,
        other => vec![other],
    };
    let entries: Vec<Entry> = items
        .iter()
        .enumerate()
        .map(|(i, v)| parse_entry(c, args, v, i))
        .collect::<Result<_>>()?;
    let records: Vec<VerifyRecord> = entries
        .iter()
        .enumerate()
        .map(|(i, e)| verify_entry(e, i, c, args))
        .collect::<Result<_>>()?;
    match c.format {
        Format::Json => write_json(c, &records)?,
        Format::Csv => {
            let header = [
                "index",
                "kind",
                "omega",
                "residual",
                "residual_pass",
                "cx",
                "cy",
                "momentum_pass",
                "period",
                "sigma_drift",
                "momentum_drift",
                "drift_pass",
                "pass",
            ];
            let body: Vec<Vec<String>> = records
                .iter()
                .map(|r| {
                    vec![
                        r.index.to_string(),
                        r.kind.clone(),
                        num(r.omega),
                        num(r.residual),
                        r.residual_pass.to_string(),
                        num(r.cx),
                        num(r.cy),
                        r.momentum_pass.to_string(),
                        num(r.period),
                        num(r.sigma_drift),
                        num(r.momentum_drift),
                        r.drift_pass.to_string(),
                        r.pass.to_string(),
                    ]
                })
                .collect();
            write_csv(c, &header, &body, &[])?;
        }
    }
    for r in records.iter().filter(|r| !r.drift_pass) {
        eprintln!(
            "entry {}: arc drift {:.1e} over one period{}",
            r.index,
            r.sigma_drift,
            r.integration_error
                .as_deref()
                .map(|e| format!(" ({e})"))
                .unwrap_or_default()
        );
    }
    Ok(if records.iter().all(|r| r.pass) {
        Status::Solved
    } else {
        Status::VerificationFailed
    })
}
