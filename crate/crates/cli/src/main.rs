use std::fmt::Write as _;
use std::io::Read;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use rangecompat::algebra::{
    enumerate_subspaces, gaussian_binomial, Elem, FieldSpec, Subspace, DEFAULT_ENUMERATION_GUARD,
};
use rangecompat::gallery::{build_case, check_case, list_cases};
use rangecompat::io::{MapDocument, SpaceDocument};
use rangecompat::opspace::{Direction, OperatorSpace};
use rangecompat::solver::{solve_compatible_maps, CompatMode, MapClass};
use rangecompat::verify::{verify_theorem_up_to, Strategy, TheoremId};
use rangecompat::Error;

/// Range-compatible and quasi-range-compatible maps on spaces of matrices over small finite fields.
#[derive(Parser)]
#[command(name = "rangecompat", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Compute every compatible map of a class on a space read from a JSON file ("-" for stdin).
    Solve {
        space: String,
        /// range, quasi (line from the file), quasi:1,0,1 or quasi-any.
        #[arg(long, default_value = "range")]
        mode: String,
        #[arg(long, default_value = "linear")]
        class: String,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Sweep the spaces covered by a statement and check its conclusion.
    Verify {
        theorem: String,
        #[command(flatten)]
        size: Size,
        #[arg(long)]
        max_codim: Option<usize>,
        /// exhaustive or sample:COUNT:SEED.
        #[arg(long, default_value = "exhaustive")]
        strategy: String,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// The extremal examples.
    Gallery {
        #[command(subcommand)]
        action: GalleryAction,
    },
    /// Count the k-dimensional subspaces of F_q^d.
    Enumerate {
        #[arg(long)]
        d: usize,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        field: String,
        /// Also print every subspace basis, one JSON array per line.
        #[arg(long)]
        stream: bool,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Orthogonal complement of a linear space under the trace pairing.
    Orth { space: String },
    /// Quotient of a space by a subspace of the codomain.
    Quotient {
        space: String,
        /// Spanning vectors, e.g. "1,0,0;0,1,1".
        #[arg(long)]
        v0: String,
    },
}

#[derive(Args)]
struct Size {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    p: usize,
    #[arg(long)]
    field: String,
}

#[derive(Subcommand)]
enum GalleryAction {
    List {
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Re-derive every claim of a case.
    Check {
        name: String,
        #[command(flatten)]
        size: OptionalSize,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Print the case's space as a JSON document.
    Export {
        name: String,
        #[command(flatten)]
        size: OptionalSize,
    },
}

/// Defaults to the case's minimal parameters.
#[derive(Args)]
struct OptionalSize {
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    p: Option<usize>,
    #[arg(long)]
    field: Option<String>,
}

enum Failure {
    Violations(String),
    Lib(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

type Outcome = Result<String, Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(Failure::Violations(out)) => {
            print!("{out}");
            ExitCode::from(1)
        }
        Err(Failure::Lib(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(match e {
                Error::Domain(_) => 2,
                Error::Resource { .. } => 3,
            })
        }
    }
}

fn run(command: Command) -> Outcome {
    match command {
        Command::Solve {
            space,
            mode,
            class,
            format,
        } => solve(&space, &mode, &class, format),
        Command::Verify {
            theorem,
            size,
            max_codim,
            strategy,
            format,
        } => {
            let id: TheoremId = theorem.parse()?;
            let strategy: Strategy = strategy.parse()?;
            let field = FieldSpec::parse(&size.field)?;
            let report = verify_theorem_up_to(id, size.n, size.p, field, max_codim, strategy)?;
            eprintln!("elapsed: {} ms", report.elapsed.as_millis());
            let value = serde_json::to_value(&report).expect("report serializes");
            let out = render(format, &value, verify_text);
            if report.passed() {
                Ok(out)
            } else {
                Err(Failure::Violations(out))
            }
        }
        Command::Gallery { action } => gallery(action),
        Command::Enumerate {
            d,
            k,
            field,
            stream,
            format,
        } => enumerate(d, k, &field, stream, format),
        Command::Orth { space } => {
            let s = load(&space)?.0;
            Ok(SpaceDocument::from_space(&s.orthogonal_complement()?, None).to_json())
        }
        Command::Quotient { space, v0 } => {
            let s = load(&space)?.0;
            let vectors = parse_vectors(&v0)?;
            let v0 = Subspace::span(s.field(), s.n(), &vectors)?;
            let (q, _) = s.quotient_space(&v0)?;
            Ok(SpaceDocument::from_space(&q, None).to_json())
        }
    }
}

fn render(format: Format, value: &Value, text: fn(&Value) -> String) -> String {
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(value).expect("json value");
            s.push('\n');
            s
        }
        Format::Text => text(value),
    }
}

fn load(path: &str) -> Result<(OperatorSpace, Option<Direction>), Error> {
    let mut text = String::new();
    let read = if path == "-" {
        std::io::stdin().read_to_string(&mut text).map(|_| ())
    } else {
        std::fs::read_to_string(path).map(|t| text = t)
    };
    read.map_err(|e| Error::Domain(format!("cannot read {path}: {e}")))?;
    let doc = SpaceDocument::from_json(&text)?;
    Ok((doc.to_space()?, doc.direction()?))
}

fn parse_vector(s: &str) -> Result<Vec<Elem>, Error> {
    s.split(',')
        .map(|x| {
            x.trim()
                .parse::<Elem>()
                .map_err(|_| Error::Domain(format!("bad vector entry {x:?}")))
        })
        .collect()
}

fn parse_vectors(s: &str) -> Result<Vec<Vec<Elem>>, Error> {
    s.split(';')
        .filter(|v| !v.trim().is_empty())
        .map(parse_vector)
        .collect()
}

fn parse_mode(
    mode: &str,
    field: FieldSpec,
    from_file: Option<Direction>,
) -> Result<CompatMode, Error> {
    match mode {
        "range" => Ok(CompatMode::Range),
        "quasi-any" => Ok(CompatMode::QuasiRangeAny),
        "quasi" => from_file.map(CompatMode::QuasiRange).ok_or_else(|| {
            Error::Domain("mode quasi needs a direction in the space file or quasi:D".into())
        }),
        m => match m.strip_prefix("quasi:") {
            Some(d) => Ok(CompatMode::QuasiRange(Direction::new(
                field,
                &parse_vector(d)?,
            )?)),
            None => Err(Error::Domain(format!("unknown mode {m:?}"))),
        },
    }
}

fn solve(path: &str, mode: &str, class: &str, format: Format) -> Outcome {
    let (space, direction) = load(path)?;
    let mode = parse_mode(mode, space.field(), direction)?;
    let class: MapClass = class.parse()?;
    let sols = solve_compatible_maps(&space, &mode, class)?;
    let results: Vec<Value> = sols
        .iter()
        .map(|s| {
            json!({
                "direction": s.direction().map(|d| d.vector().to_vec()),
                "dim": s.dim(),
                "local_dim": s.local_dim(),
                "all_local": s.all_local(),
                "witness": s.witness().map(MapDocument::from_map),
            })
        })
        .collect();
    let value = json!({
        "mode": mode.to_string(),
        "class": class,
        "space_dim": space.dim(),
        "codim": space.codim(),
        "results": results,
    });
    Ok(render(format, &value, solve_text))
}

fn join(v: &Value) -> String {
    v.as_array()
        .map(|a| {
            a.iter()
                .map(|x| x.to_string())
                .collect::<Vec<_>>()
                .join(",")
        })
        .unwrap_or_default()
}

fn solve_text(v: &Value) -> String {
    let mut out = format!(
        "{} maps, mode {}, space of dimension {} and codimension {}\n",
        v["class"].as_str().unwrap_or_default(),
        v["mode"].as_str().unwrap_or_default(),
        v["space_dim"],
        v["codim"]
    );
    for r in v["results"].as_array().into_iter().flatten() {
        let line = if r["direction"].is_null() {
            "range".to_string()
        } else {
            format!("line ({})", join(&r["direction"]))
        };
        let _ = writeln!(
            out,
            "{line}: solution dimension {}, local dimension {}, all local: {}",
            r["dim"], r["local_dim"], r["all_local"]
        );
        if !r["witness"].is_null() {
            let _ = writeln!(
                out,
                "  witness coefficients [{}]",
                join(&r["witness"]["coefficients"])
            );
        }
    }
    out
}

fn verify_text(v: &Value) -> String {
    let checked = v["spaces_checked"].as_u64().unwrap_or(0);
    let violations = v["violations"].as_array().map_or(0, Vec::len);
    let mut out = String::new();
    for p in v["params"].as_array().into_iter().flatten() {
        let _ = writeln!(
            out,
            "{} on Mat_{{{},{}}}({}), codim {}..={}, strategy {}",
            v["theorem"].as_str().unwrap_or_default(),
            p["n"],
            p["p"],
            p["field"].as_str().unwrap_or_default(),
            p["min_codim"],
            p["max_codim"],
            v["strategy"].as_str().unwrap_or_default()
        );
    }
    let _ = writeln!(
        out,
        "{checked} space{} checked",
        if checked == 1 { "" } else { "s" }
    );
    if let Some(stats) = v["side_stats"].as_object() {
        for (k, n) in stats {
            let _ = writeln!(out, "  {k}: {n}");
        }
    }
    for viol in v["violations"].as_array().into_iter().flatten() {
        let _ = writeln!(
            out,
            "violation: {}",
            viol["detail"].as_str().unwrap_or_default()
        );
        let _ = writeln!(out, "  space: {}", viol["space"]);
        if !viol["witness"].is_null() {
            let _ = writeln!(out, "  witness: {}", viol["witness"]);
        }
    }
    let _ = writeln!(out, "{}", if violations == 0 { "PASS" } else { "FAIL" });
    out
}

fn case_size(name: &str, size: OptionalSize) -> Result<(usize, usize, FieldSpec), Error> {
    let info = list_cases()
        .iter()
        .find(|c| c.name == name)
        .ok_or_else(|| Error::Domain(format!("unknown gallery case {name:?}")))?;
    let (n, p, f) = info.minimal;
    let field = FieldSpec::parse(size.field.as_deref().unwrap_or(f))?;
    Ok((size.n.unwrap_or(n), size.p.unwrap_or(p), field))
}

fn gallery(action: GalleryAction) -> Outcome {
    match action {
        GalleryAction::List { format } => {
            let value = serde_json::to_value(list_cases()).expect("case list serializes");
            Ok(render(format, &value, |v| {
                let mut out = String::new();
                for c in v.as_array().into_iter().flatten() {
                    let m = &c["minimal"];
                    let _ = writeln!(
                        out,
                        "{:<12} {}  (minimal: n={} p={} {})",
                        c["name"].as_str().unwrap_or_default(),
                        c["constraints"].as_str().unwrap_or_default(),
                        m[0],
                        m[1],
                        m[2].as_str().unwrap_or_default()
                    );
                }
                out
            }))
        }
        GalleryAction::Check { name, size, format } => {
            let (n, p, field) = case_size(&name, size)?;
            let case = build_case(&name, n, p, field)?;
            let report = check_case(&case);
            let value = serde_json::to_value(&report).expect("case report serializes");
            let out = render(format, &value, case_text);
            if report.passed() {
                Ok(out)
            } else {
                Err(Failure::Violations(out))
            }
        }
        GalleryAction::Export { name, size } => {
            let (n, p, field) = case_size(&name, size)?;
            let case = build_case(&name, n, p, field)?;
            Ok(SpaceDocument::from_space(&case.space, case.direction.as_ref()).to_json())
        }
    }
}

fn case_text(v: &Value) -> String {
    let mut out = format!(
        "{} at n={} p={} over {}: codim {}\nnon-local: {}\n",
        v["name"].as_str().unwrap_or_default(),
        v["n"],
        v["p"],
        v["field"].as_str().unwrap_or_default(),
        v["codim"],
        v["nonlocal"]
    );
    let mut all = true;
    for c in v["checks"].as_array().into_iter().flatten() {
        let ok = c["passed"].as_bool().unwrap_or(false);
        all &= ok;
        let detail = c["detail"].as_str().unwrap_or_default();
        let _ = writeln!(
            out,
            "  [{}] {}{}{}",
            if ok { "ok" } else { "FAILED" },
            c["claim"].as_str().unwrap_or_default(),
            if detail.is_empty() { "" } else { ": " },
            detail
        );
    }
    let _ = writeln!(out, "{}", if all { "PASS" } else { "FAIL" });
    out
}

fn enumerate(d: usize, k: usize, field: &str, stream: bool, format: Format) -> Outcome {
    let f = FieldSpec::parse(field)?;
    if k > d {
        return Err(Error::Domain(format!(
            "no {k}-dimensional subspaces of a {d}-dimensional space"
        ))
        .into());
    }
    let count = gaussian_binomial(d, k, f.q() as u64);
    let value = json!({ "d": d, "k": k, "field": f.name(), "count": count.to_string() });
    let mut out = render(format, &value, |v| {
        format!("{}\n", v["count"].as_str().unwrap_or_default())
    });
    if stream {
        for s in enumerate_subspaces(f, d, k, DEFAULT_ENUMERATION_GUARD)? {
            let basis: Vec<Vec<Elem>> = s.basis_vectors().map(<[Elem]>::to_vec).collect();
            out.push_str(&serde_json::to_string(&basis).expect("basis serializes"));
            out.push('\n');
        }
    }
    Ok(out)
}
