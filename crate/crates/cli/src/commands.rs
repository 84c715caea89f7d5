//! Subcommand implementations. Each returns the complete output text so
//! nothing is written when a command fails part way.

use std::fmt::Write as _;
use std::path::Path;

use anyhow::{anyhow, bail, Context, Result};
use gwcalc_core::bps::{bps_to_gw_family, check_integrality, gw_to_bps_family, ClassRecord};
use gwcalc_core::correspondence::deconvolve;
use gwcalc_core::degeneration::{
    evaluate_degeneration, preset, survivors_for, Caps, GeometryModel, Insertion, InvariantTable, Preset,
    SurvivorsReport,
};
use gwcalc_core::series::{sin_u_over_u, sinc_half, sinc_scaled};
use gwcalc_core::suite::{run_suite, SuiteConfig, SuiteReport};
use gwcalc_core::{EvenSeries, Rational};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::input;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Table,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Direction {
    ToBps,
    ToGw,
}

pub struct Output {
    pub text: String,
    pub success: bool,
}

impl Output {
    fn ok(text: String) -> Self {
        Output { text, success: true }
    }
}

fn to_json(v: &impl Serialize) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

/// `components=K,mu=M,degree=D,triples=T`; omitted keys keep their defaults.
pub fn parse_caps(text: &str) -> Result<Caps> {
    let mut caps = Caps::default();
    for item in text.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let (key, value) = item
            .split_once('=')
            .ok_or_else(|| anyhow!("caps: expected key=value, found {item:?}"))?;
        let n: u64 = value
            .trim()
            .parse()
            .map_err(|_| anyhow!("caps: {key} must be a positive integer, found {value:?}"))?;
        if n == 0 {
            bail!("caps: {key} must be positive");
        }
        match key.trim() {
            "components" => caps.max_components = n as usize,
            "mu" => caps.max_mu = n as u32,
            "degree" => caps.max_degree = n as i64,
            "triples" => caps.max_triples = n as usize,
            other => bail!("caps: unknown key {other:?} (expected components, mu, degree, triples)"),
        }
    }
    Ok(caps)
}

/// Parses `name`, `name^k`, `sinc_scaled(d)` or `sinc_scaled(d)^k`.
pub fn parse_series_expr(expr: &str, order: usize) -> Result<EvenSeries> {
    let e: String = expr.chars().filter(|c| !c.is_whitespace()).collect();
    let (base, power) = match e.split_once('^') {
        Some((b, k)) => (
            b.to_string(),
            k.parse::<i64>()
                .map_err(|_| anyhow!("series: exponent {k:?} is not an integer"))?,
        ),
        None => (e.clone(), 1),
    };
    let series = match base.as_str() {
        "sinc_half" => sinc_half(order),
        "sin_u_over_u" => sin_u_over_u(order),
        b if b.starts_with("sinc_scaled(") && b.ends_with(')') => {
            let d: i64 = b["sinc_scaled(".len()..b.len() - 1]
                .parse()
                .map_err(|_| anyhow!("series: sinc_scaled needs an integer argument"))?;
            if d < 1 {
                bail!("series: sinc_scaled argument must be at least 1");
            }
            sinc_scaled(d, order)
        }
        other => bail!("series: unknown series {other:?} (expected sinc_half, sinc_scaled(d), sin_u_over_u)"),
    };
    Ok(series.pow(power)?)
}

fn coefficient_table(header: &str, values: &[Rational]) -> String {
    let mut s = format!("g\t{header}\n");
    for (g, v) in values.iter().enumerate() {
        let _ = writeln!(s, "{g}\t{v}");
    }
    s
}

pub fn series(expr: &str, order: usize, format: Format) -> Result<Output> {
    let s = parse_series_expr(expr, order)?;
    Ok(Output::ok(match format {
        Format::Json => to_json(&json!({ "expr": expr, "order": order, "coefficients": s.coeffs() })),
        Format::Table => coefficient_table("coefficient", s.coeffs()),
    }))
}

pub fn solve(h_path: &Path, p_path: &Path, format: Format) -> Result<Output> {
    let h = input::genus_sequence_file(h_path)?;
    let p = input::genus_sequence_file(p_path)?;
    let c = deconvolve(&h, &p)?.with_label("C");
    Ok(Output::ok(match format {
        Format::Json => to_json(&c),
        Format::Table => coefficient_table("C_g", &c.values),
    }))
}

/// A custom geometry document for `degenerate`.
#[derive(Deserialize)]
struct GeometryDoc {
    #[serde(default = "custom_name")]
    name: String,
    geometry: GeometryModel,
    #[serde(default)]
    plus_insertions: Vec<Insertion>,
}

fn custom_name() -> String {
    "custom".into()
}

fn load_geometry(target: &str) -> Result<Preset> {
    if let Ok(p) = preset(target) {
        return Ok(p);
    }
    let path = Path::new(target);
    if !path.exists() {
        bail!(
            "{target:?} is neither a preset ({}) nor a file",
            gwcalc_core::degeneration::PRESET_NAMES.join(", ")
        );
    }
    let text = input::read_text(path)?;
    let doc: GeometryDoc =
        serde_json::from_str(&text).with_context(|| format!("{}: invalid geometry document", path.display()))?;
    doc.geometry
        .validate()
        .with_context(|| format!("{}: geometry", path.display()))?;
    Ok(Preset {
        name: doc.name,
        description: String::new(),
        geometry: doc.geometry,
        plus_insertions: doc.plus_insertions,
    })
}

fn load_table(path: &Path) -> Result<InvariantTable> {
    let text = input::read_text(path)?;
    serde_json::from_str(&text).with_context(|| format!("{}: invalid invariant table", path.display()))
}

fn survivors_table(r: &SurvivorsReport) -> String {
    let mut s = format!("preset {}\n", r.preset);
    s.push_str("profiles (μ, δ-degrees, reported):\n");
    for p in &r.profiles {
        let _ = writeln!(s, "  μ={:?} δ={:?} {:?}", p.mu, p.delta_degrees, p.reported);
    }
    s.push_str("genus\tm\texamined\teliminated\tprofiles\n");
    for g in &r.per_genus {
        let _ = writeln!(
            s,
            "{}\t{}\t{}\t{}\t{}",
            g.genus,
            g.minus_marks,
            g.skeletons_examined,
            g.skeletons_eliminated,
            g.profiles.len()
        );
    }
    for t in &r.truncations {
        let _ = writeln!(s, "note: {t}");
    }
    s
}

pub struct DegenerateArgs<'a> {
    pub target: &'a str,
    pub plus_table: Option<&'a Path>,
    pub minus_table: Option<&'a Path>,
    pub genus_max: u32,
    pub minus_marks: Option<usize>,
}

pub fn degenerate(args: &DegenerateArgs, caps: &Caps, format: Format) -> Result<Output> {
    let p = load_geometry(args.target)?;
    match (args.plus_table, args.minus_table) {
        (None, None) => {
            let r = survivors_for(
                &p.name,
                &p.geometry,
                &p.plus_insertions,
                args.genus_max,
                args.minus_marks.unwrap_or(3),
                caps,
            )?;
            Ok(Output::ok(match format {
                Format::Json => to_json(&r),
                Format::Table => survivors_table(&r),
            }))
        }
        (Some(plus), Some(minus)) => {
            let plus = load_table(plus)?;
            let minus = load_table(minus)?;
            let m = args.minus_marks.unwrap_or(1);
            let values = (0..=args.genus_max)
                .map(|g| evaluate_degeneration(&p.problem(g, m), &plus, &minus, &p.geometry, caps))
                .collect::<Result<Vec<_>, _>>()?;
            Ok(Output::ok(match format {
                Format::Json => to_json(&json!({ "preset": p.name, "minus_marks": m, "values": values })),
                Format::Table => coefficient_table("value", &values),
            }))
        }
        _ => bail!("--plus-table and --minus-table must be given together"),
    }
}

fn load_records(path: &Path) -> Result<Vec<ClassRecord>> {
    let v = input::read_json(path)?;
    let items = match v {
        Value::Array(items) => items,
        single => vec![single],
    };
    items
        .into_iter()
        .enumerate()
        .map(|(i, item)| {
            serde_json::from_value(item).with_context(|| format!("{}: record {i}", path.display()))
        })
        .collect()
}

pub fn bps(path: &Path, direction: Direction, format: Format) -> Result<Output> {
    let records = load_records(path)?;
    let (out, integrality) = match direction {
        Direction::ToBps => {
            let n = gw_to_bps_family(&records)?;
            let reports: Vec<_> = n.iter().map(check_integrality).collect();
            (n, Some(reports))
        }
        Direction::ToGw => {
            let gw = bps_to_gw_family(&records)?;
            let out = records
                .iter()
                .zip(gw)
                .map(|(r, s)| ClassRecord::new(r.class.clone(), r.insertions.clone(), s.values))
                .collect();
            (out, None)
        }
    };
    Ok(Output::ok(match format {
        Format::Json => to_json(&json!({ "records": out, "integrality": integrality })),
        Format::Table => {
            let mut s = String::new();
            for (i, r) in out.iter().enumerate() {
                let verdict = match &integrality {
                    Some(rep) if rep[i].integral => " integral",
                    Some(_) => " non-integral",
                    None => "",
                };
                let _ = writeln!(
                    s,
                    "class {:?} c1={}{verdict}",
                    r.class.coords(),
                    r.class.c1_pairing()
                );
                s.push_str(&coefficient_table(
                    if direction == Direction::ToBps { "n_g" } else { "GW_g" },
                    &r.values,
                ));
            }
            s
        }
    }))
}

fn suite_table(r: &SuiteReport) -> String {
    let mut s = String::new();
    let width = r.checks.iter().map(|c| c.id.len()).max().unwrap_or(0);
    for c in &r.checks {
        let _ = writeln!(
            s,
            "{:<width$}  {}  {}  [{}]",
            c.id,
            if c.passed { "PASS" } else { "FAIL" },
            c.statement,
            c.detail
        );
    }
    let passed = r.checks.iter().filter(|c| c.passed).count();
    let _ = writeln!(s, "{passed}/{} checks passed", r.checks.len());
    s
}

pub fn verify(order: usize, caps: &Caps, seed: Option<u64>, samples: Option<usize>, format: Format) -> Result<Output> {
    let mut cfg = SuiteConfig {
        order,
        caps: caps.clone(),
        ..SuiteConfig::default()
    };
    if let Some(seed) = seed {
        cfg.seed = seed;
    }
    if let Some(samples) = samples {
        cfg.samples = samples;
    }
    let r = run_suite(&cfg);
    Ok(Output {
        success: r.passed,
        text: match format {
            Format::Json => to_json(&r),
            Format::Table => suite_table(&r),
        },
    })
}
