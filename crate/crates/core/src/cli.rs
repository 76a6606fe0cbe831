//! Command-line front end. `run` writes one report and returns the exit
//! status: 0 success, 1 rejected parameters, 2 usage error (clap).

use std::io::{self, Write};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use crate::realize::{verify_transition, SignChoice, StandardBasis, TransitionMatrix, Violation};
use crate::sieve::{enumerate, CensusRecord};
use crate::spectrum::{CharacterTable, ParameterSet};
use crate::surd::{Rational, Surd};
use crate::taxonomy;
use crate::tensor::{lambda_tensor, StructureTensor};

pub const SCHEMA: u32 = 1;

#[derive(Parser, Debug)]
#[command(name = "rba6", version, about = "Exact toolkit for noncommutative rank-6 reality-based algebras")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Validate a parameter set and print its character table.
    Check(ParamsArgs),
    /// Build the standard basis matrices and transition matrix.
    Construct(BasisArgs),
    /// Print the structure constants λ_ijk.
    Lambda(BasisArgs),
    /// List integral parameter sets up to an order bound.
    Enumerate(EnumerateArgs),
    /// Closed subsets, fusions, feasibility filters and family label.
    Classify(BasisArgs),
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum TableFormat {
    Json,
    Csv,
    Md,
}

fn parse_params(s: &str) -> Result<ParameterSet, String> {
    s.parse().map_err(|e: crate::spectrum::ParamsParseError| e.to_string())
}

#[derive(Args, Debug)]
pub struct ParamsArgs {
    /// "d1,d2,d3,d4;p1,p2,p3,p4", rational entries.
    #[arg(long, value_parser = parse_params)]
    pub params: ParameterSet,
    #[arg(long, value_enum, default_value = "json")]
    pub format: Format,
    /// Add decimal renderings, marked approximate.
    #[arg(long)]
    pub approx: bool,
}

#[derive(Args, Debug)]
pub struct BasisArgs {
    #[command(flatten)]
    pub base: ParamsArgs,
    /// ε₁,ε₂,ε₃ as "+,+,+".
    #[arg(long, default_value = "+,+,+", allow_hyphen_values = true)]
    pub signs: SignChoice,
}

#[derive(Args, Debug)]
pub struct EnumerateArgs {
    #[arg(long)]
    pub max_order: i64,
    /// Keep only records with nonnegative structure constants.
    #[arg(long)]
    pub require_ta: bool,
    #[arg(long, env = "RBA6_JOBS")]
    pub jobs: Option<usize>,
    #[arg(long, value_enum, default_value = "json")]
    pub format: TableFormat,
}

pub fn run(cli: &Cli, out: &mut dyn Write) -> io::Result<i32> {
    match &cli.command {
        Command::Check(a) => check(a, out),
        Command::Construct(a) => construct(a, out),
        Command::Lambda(a) => lambda(a, out),
        Command::Enumerate(a) => enumerate_cmd(a, out),
        Command::Classify(a) => classify(a, out),
    }
}

fn envelope(command: &str, body: Value) -> Value {
    let mut v = json!({ "schema": SCHEMA, "command": command });
    if let (Value::Object(m), Value::Object(b)) = (&mut v, body) {
        m.extend(b);
    }
    v
}

fn emit_json(out: &mut dyn Write, v: &Value) -> io::Result<()> {
    serde_json::to_writer_pretty(&mut *out, v)?;
    writeln!(out)
}

fn to_value<T: Serialize>(t: &T) -> Value {
    serde_json::to_value(t).expect("report serializes")
}

fn rejected(cmd: &str, a: &ParamsArgs, reason: Value, text: String, out: &mut dyn Write) -> io::Result<i32> {
    match a.format {
        Format::Json => emit_json(
            out,
            &envelope(cmd, json!({ "params": a.params, "valid": false, "rejection": reason })),
        )?,
        Format::Text => writeln!(out, "rejected: {text}")?,
    }
    Ok(1)
}

fn approx_table(t: &CharacterTable) -> Value {
    let f = |v: &[Rational]| v.iter().map(Rational::to_f64).collect::<Vec<_>>();
    json!({
        "note": "approximate decimal values",
        "m_phi": t.m_phi.to_f64(),
        "m_chi": t.m_chi.to_f64(),
        "chi": f(&t.chi),
    })
}

fn check(a: &ParamsArgs, out: &mut dyn Write) -> io::Result<i32> {
    if let Err(r) = a.params.validate() {
        return rejected("check", a, to_value(&r), r.to_string(), out);
    }
    let t = a.params.character_table();
    match a.format {
        Format::Json => {
            let mut body = json!({ "params": a.params, "valid": true, "table": t });
            if a.approx {
                body["approx"] = approx_table(&t);
            }
            emit_json(out, &envelope("check", body))?;
        }
        Format::Text => {
            writeln!(out, "ok n={} (m_phi,m_chi)=({},{})", t.n, t.m_phi, t.m_chi)?;
            let row = |v: &[Rational; 6]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ");
            writeln!(out, "delta: {}", row(&t.delta))?;
            writeln!(out, "phi:   {}", row(&t.phi))?;
            writeln!(out, "chi:   {}", row(&t.chi))?;
            if a.approx {
                writeln!(out, "approx: m_phi≈{:.6} m_chi≈{:.6}", t.m_phi.to_f64(), t.m_chi.to_f64())?;
            }
        }
    }
    Ok(0)
}

fn basis(a: &BasisArgs) -> Result<StandardBasis, (Value, String)> {
    let p = &a.base.params;
    if let Err(r) = p.validate() {
        return Err((to_value(&r), r.to_string()));
    }
    StandardBasis::construct(p, a.signs).map_err(|e| (json!({ "reason": "construction", "detail": e.to_string() }), e.to_string()))
}

fn approx_mat(m: &[[Surd; 2]; 2]) -> [[f64; 2]; 2] {
    std::array::from_fn(|i| std::array::from_fn(|j| m[i][j].to_f64()))
}

/// Parses a `construct` JSON report and re-runs every transition check.
pub fn verify_construct_json(text: &str) -> Result<Vec<Violation>, String> {
    let v: Value = serde_json::from_str(text).map_err(|e| e.to_string())?;
    if v["schema"] != json!(SCHEMA) {
        return Err(format!("unsupported schema {}", v["schema"]));
    }
    let params: ParameterSet = serde_json::from_value(v["params"].clone()).map_err(|e| e.to_string())?;
    params.validate().map_err(|e| e.to_string())?;
    let p: TransitionMatrix = serde_json::from_value(v["transition"].clone()).map_err(|e| e.to_string())?;
    Ok(verify_transition(&p, &params.character_table()))
}

fn construct(a: &BasisArgs, out: &mut dyn Write) -> io::Result<i32> {
    let b = match basis(a) {
        Ok(b) => b,
        Err((v, t)) => return rejected("construct", &a.base, v, t, out),
    };
    match a.base.format {
        Format::Json => {
            let mut body = json!({
                "params": b.params,
                "signs": b.signs.to_string(),
                "table": b.table,
                "diagonal_index": b.diagonal_index,
                "basis": b.b,
                "transition": b.transition(),
            });
            if a.base.approx {
                body["approx"] = json!({
                    "note": "approximate decimal values",
                    "basis": b.b.iter().map(approx_mat).collect::<Vec<_>>(),
                });
            }
            emit_json(out, &envelope("construct", body))?;
        }
        Format::Text => {
            writeln!(out, "params {} signs {}", b.params, b.signs)?;
            for (i, m) in b.b.iter().enumerate() {
                writeln!(out, "B{i} = [[{}, {}], [{}, {}]]", m[0][0], m[0][1], m[1][0], m[1][1])?;
                if a.base.approx {
                    let f = approx_mat(m);
                    writeln!(out, "   ≈ [[{:.6}, {:.6}], [{:.6}, {:.6}]]", f[0][0], f[0][1], f[1][0], f[1][1])?;
                }
            }
        }
    }
    Ok(0)
}

fn tensor_flags(t: &StructureTensor) -> Value {
    json!({
        "integral": t.is_integral,
        "table_algebra": t.is_table_algebra,
        "standard": t.is_standard,
        "within_character_bounds": t.within_character_bounds,
    })
}

fn lambda(a: &BasisArgs, out: &mut dyn Write) -> io::Result<i32> {
    let b = match basis(a) {
        Ok(b) => b,
        Err((v, t)) => return rejected("lambda", &a.base, v, t, out),
    };
    let t = lambda_tensor(&b);
    match a.base.format {
        Format::Json => {
            let mut body = json!({
                "params": b.params,
                "signs": b.signs.to_string(),
                "flags": tensor_flags(&t),
                "lambda": t.sparse(),
            });
            if a.base.approx {
                let ap: Vec<Value> = t
                    .sparse()
                    .iter()
                    .map(|e| json!([e.i, e.j, e.k, e.value.to_f64()]))
                    .collect();
                body["approx"] = json!({ "note": "approximate decimal values", "lambda": ap });
            }
            emit_json(out, &envelope("lambda", body))?;
        }
        Format::Text => {
            writeln!(
                out,
                "params {} integral={} table_algebra={}",
                b.params, t.is_integral, t.is_table_algebra
            )?;
            for i in 0..t.rank {
                for j in 0..t.rank {
                    writeln!(out, "{}", t.expansion(i, j))?;
                }
            }
        }
    }
    Ok(0)
}

fn classify(a: &BasisArgs, out: &mut dyn Write) -> io::Result<i32> {
    let b = match basis(a) {
        Ok(b) => b,
        Err((v, t)) => return rejected("classify", &a.base, v, t, out),
    };
    let t = lambda_tensor(&b);
    let closed = taxonomy::closed_subsets(&t);
    let kernel = taxonomy::kernel_phi(&b.table);
    let mphi1 = taxonomy::classify_mphi1(&b.params, &b.table).ok();
    let family = taxonomy::match_family(&b.params, &t);
    let feas = taxonomy::feasibility(&b.params, &t);
    match a.base.format {
        Format::Json => {
            let body = json!({
                "params": b.params,
                "table": b.table,
                "flags": tensor_flags(&t),
                "primitive": closed.len() == 2,
                "closed_subsets": closed,
                "kernel_phi": kernel,
                "mphi_one": mphi1,
                "family": family,
                "feasibility": feas,
            });
            emit_json(out, &envelope("classify", body))?;
        }
        Format::Text => {
            writeln!(out, "params {}  n={}", b.params, b.table.n)?;
            writeln!(out, "family: {} (best effort)", family.label)?;
            writeln!(out, "integral={} table_algebra={}", t.is_integral, t.is_table_algebra)?;
            for c in &closed {
                writeln!(out, "closed {:?} order={} normal={}", c.indices, c.order, c.normal)?;
            }
            writeln!(out, "kernel of phi: {kernel:?}")?;
            if let Some(m) = &mphi1 {
                writeln!(out, "m_phi = 1: {}", serde_json::to_string(m).unwrap_or_default())?;
            }
            match &feas.center_fusion {
                Some(c) => writeln!(
                    out,
                    "center fusion: ({}, {}, {})",
                    c.degrees[0], c.degrees[1], c.degrees[2]
                )?,
                None => writeln!(out, "center fusion: none")?,
            }
            for p in &feas.rank4_profiles {
                let d: Vec<String> = p.sorted_degrees().iter().map(|x| x.to_string()).collect();
                let m: Vec<String> = p.multiplicities.iter().map(|x| x.to_string()).collect();
                writeln!(out, "rank-4 fusion K={:?}: ({})/({})", p.k, d.join(","), m.join(","))?;
            }
            if feas.evenness_failures.is_empty() {
                writeln!(out, "evenness: pass")?;
            }
            for e in &feas.evenness_failures {
                writeln!(
                    out,
                    "evenness: fail at i={} j={}: lambda_iji={} delta_i={}",
                    e.i, e.j, e.lambda_iji, e.delta_i
                )?;
            }
            for l in &feas.literature {
                writeln!(out, "literature: {} {:?} {}: {}", l.kind, l.degrees, l.status, l.detail)?;
            }
        }
    }
    Ok(0)
}

/// Comment column: family label plus TA / primitivity notes.
pub fn comment(r: &CensusRecord) -> String {
    let mut parts = Vec::new();
    if !matches!(r.family.tag, taxonomy::FamilyTag::Primitive | taxonomy::FamilyTag::Other) {
        parts.push(r.family.label.clone());
    }
    parts.push(if r.flags.table_algebra { "TA".into() } else { "Not TA".into() });
    if r.flags.primitive {
        parts.push("primitive".into());
    }
    parts.join(", ")
}

pub fn render_csv(records: &[CensusRecord]) -> String {
    let mut s = String::from("n,delta,phi,m_phi,m_chi,integral,table_algebra,integral_multiplicities,primitive,family\n");
    for r in records {
        let j = |v: &[Rational; 4]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ");
        s.push_str(&format!(
            "{},{},{},{},{},{},{},{},{},\"{}\"\n",
            r.table.n,
            j(&r.params.delta),
            j(&r.params.phi),
            r.table.m_phi,
            r.table.m_chi,
            r.flags.integral,
            r.flags.table_algebra,
            r.flags.integral_multiplicities,
            r.flags.primitive,
            r.family.label
        ));
    }
    s
}

pub fn render_md(records: &[CensusRecord]) -> String {
    let mut s = String::from("| n | [δ,φ] | (m_φ,m_χ) | comments |\n|---:|---|---|---|\n");
    for r in records {
        let j = |v: &[Rational; 4]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",");
        s.push_str(&format!(
            "| {} | [({}),({})] | ({},{}) | {} |\n",
            r.table.n,
            j(&r.params.delta),
            j(&r.params.phi),
            r.table.m_phi,
            r.table.m_chi,
            comment(r)
        ));
    }
    s
}

fn enumerate_cmd(a: &EnumerateArgs, out: &mut dyn Write) -> io::Result<i32> {
    if a.max_order < 6 {
        writeln!(io::stderr(), "error: --max-order must be at least 6")?;
        return Ok(2);
    }
    let records = enumerate(a.max_order, a.require_ta, a.jobs);
    match a.format {
        TableFormat::Json => emit_json(
            out,
            &envelope(
                "enumerate",
                json!({
                    "max_order": a.max_order,
                    "require_ta": a.require_ta,
                    "count": records.len(),
                    "records": records,
                }),
            ),
        )?,
        TableFormat::Csv => out.write_all(render_csv(&records).as_bytes())?,
        TableFormat::Md => out.write_all(render_md(&records).as_bytes())?,
    }
    Ok(0)
}
