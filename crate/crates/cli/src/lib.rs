//! Command-line front end. [`run`] turns an argument vector into the exit
//! code and the bytes destined for stdout and stderr.

pub mod grammar;
mod render;

use clap::{Args, Parser, Subcommand, ValueEnum};
use negacantor::codec::{encode_with, is_nega_d_rational, EncodeOptions};
use negacantor::dynamics::{
    finite_expansion, rationality_probe, shift, shift_delete, shift_value, state_bound, Probe,
    ProbeInput,
};
use negacantor::geometry::{
    cylinder, dimension_estimate, default_grid, locate, ms0_classify, ms0_cover, ms0_cylinder,
    ms0_total_length, position_set_cover, position_set_stats, CoverTarget, CylinderBase,
    EnumOptions, IncompleteSumSpec, Ms0Class, PositionConstraint,
};
use negacantor::transforms::{
    negad_of_negadn, negadn_of_negad, pair_compress, parity_complement, parity_split, Parity,
};
use negacantor::{canonicalize, evaluate, twin, Basis, DigitString, Execution, Mode, Rational, Value};
use serde_json::{json, Map, Value as Json};

pub use grammar::{parse_basis, parse_digits, InputError, ParseError};
use render::{rat, Cell, Report, Table};

#[derive(Parser, Debug)]
#[command(name = "negacantor", version, about = "Alternating Cantor series toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Common {
    /// const:<d> | periodic:<d1,..> | prefix:<a,..>;periodic:<..> | factorial | primes | even
    #[arg(long)]
    basis: String,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Adds truncated decimal renderings with this many fractional digits.
    #[arg(long)]
    approx: Option<usize>,
    /// Enumerate covers on one thread.
    #[arg(long)]
    sequential: bool,
    /// Bound on enumerated cylinders.
    #[arg(long)]
    limit: Option<u64>,
}

impl Common {
    fn opts(&self) -> EnumOptions {
        let mut o = EnumOptions::with_exec(if self.sequential {
            Execution::Sequential
        } else {
            Execution::default()
        });
        if let Some(l) = self.limit {
            o.limit = l;
        }
        o
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ConvertTo {
    Negadn,
    Negad,
    Canonical,
    Twin,
    EvenComplement,
    OddComplement,
    Compress,
    Split,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum CoverEmit {
    Summary,
    Cover,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum MsumEmit {
    Summary,
    Cover,
    Gaps,
    Class,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Canonical digits of a rational.
    Encode {
        #[command(flatten)]
        common: Common,
        #[arg(long, allow_hyphen_values = true)]
        x: String,
        #[arg(long, default_value_t = 64)]
        horizon: usize,
    },
    /// Value of a digit string.
    Decode {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        digits: String,
        /// Terms used for enclosures when no exact value exists.
        #[arg(long, default_value_t = 64)]
        depth: usize,
    },
    /// Maps between digit systems.
    Convert {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        digits: String,
        #[arg(long, value_enum)]
        to: ConvertTo,
    },
    /// Shift operator on digits or on a value.
    Shift {
        #[command(flatten)]
        common: Common,
        #[arg(long, required_unless_present = "x", conflicts_with = "x")]
        digits: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        x: Option<String>,
        #[arg(long, default_value_t = 1)]
        k: usize,
        /// Delete position m instead of shifting.
        #[arg(long, conflicts_with = "x")]
        delete: Option<usize>,
    },
    /// Cylinder interval of a base, or the base containing x.
    Cylinder {
        #[command(flatten)]
        common: Common,
        #[arg(long, required_unless_present = "x", conflicts_with = "x")]
        base: Option<String>,
        #[arg(long, allow_hyphen_values = true, requires = "rank")]
        x: Option<String>,
        #[arg(long)]
        rank: Option<usize>,
    },
    /// Measure and diameter of a digit-position set.
    Measure {
        #[command(flatten)]
        common: Common,
        /// k:c pairs, e.g. 2:0,5:1
        #[arg(long)]
        positions: String,
        #[arg(long, value_enum, default_value_t = CoverEmit::Summary)]
        emit: CoverEmit,
        #[arg(long)]
        rank: Option<usize>,
    },
    /// Incomplete-sums set of a series.
    Msum {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        s0: String,
        #[arg(long, default_value_t = 8)]
        depth: usize,
        #[arg(long, value_enum, default_value_t = MsumEmit::Summary)]
        emit: MsumEmit,
    },
    /// Covering-sum dimension estimate.
    Dim {
        #[command(flatten)]
        common: Common,
        #[arg(long, group = "target")]
        alphabet: Option<String>,
        #[arg(long, group = "target")]
        positions: Option<String>,
        #[arg(long, group = "target")]
        s0: Option<String>,
        #[arg(long, default_value_t = 12)]
        depth: usize,
        /// Increasing alpha values; defaults to 0, 0.05, .., 1.
        #[arg(long)]
        grid: Option<String>,
    },
    /// Finite expansion of p/q, or the two-representation test for digits.
    Rational {
        #[command(flatten)]
        common: Common,
        #[arg(long, allow_hyphen_values = true, conflicts_with_all = ["x", "digits"])]
        p: Option<String>,
        #[arg(long, conflicts_with_all = ["x", "digits"])]
        q: Option<String>,
        #[arg(long, allow_hyphen_values = true, conflicts_with = "digits")]
        x: Option<String>,
        #[arg(long)]
        digits: Option<String>,
    },
    /// Looks for a repeat in the shift orbit.
    Probe {
        #[command(flatten)]
        common: Common,
        #[arg(long, allow_hyphen_values = true, required_unless_present = "digits", conflicts_with = "digits")]
        x: Option<String>,
        #[arg(long)]
        digits: Option<String>,
        #[arg(long)]
        budget: Option<usize>,
    },
}

/// Exit code and rendered streams of one invocation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

fn failure(code: i32, error: &str, message: &str) -> Outcome {
    let doc = json!({"error": error, "exit": code, "message": message});
    Outcome {
        code,
        stdout: String::new(),
        stderr: format!("{doc}\n"),
    }
}

fn input_failure(e: InputError) -> Outcome {
    match e {
        InputError::Parse(p) => failure(2, "ParseError", &p.to_string()),
        InputError::Usage(m) => failure(2, "UsageError", &m),
        InputError::Library(l) => failure(1, l.code(), &l.to_string()),
    }
}

pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => Outcome {
                    code: 0,
                    stdout: e.to_string(),
                    stderr: String::new(),
                },
                _ => {
                    let text = e.to_string();
                    let line = text
                        .lines()
                        .take_while(|l| !l.starts_with("Usage:"))
                        .map(|l| l.trim().trim_start_matches("error: "))
                        .filter(|l| !l.is_empty())
                        .collect::<Vec<_>>()
                        .join(" ");
                    failure(2, "UsageError", &line)
                }
            };
        }
    };
    let (fmt, result) = dispatch(cli.command);
    match result.and_then(|r| r.render(fmt.format, fmt.approx)) {
        Ok(stdout) => Outcome {
            code: 0,
            stdout,
            stderr: String::new(),
        },
        Err(e) => input_failure(e),
    }
}

type Out = Result<Report, InputError>;

fn dispatch(command: Command) -> (Format2, Out) {
    macro_rules! go {
        ($common:expr, $body:expr) => {{
            let f = Format2 {
                format: $common.format,
                approx: $common.approx,
            };
            (f, $body)
        }};
    }
    match command {
        Command::Encode { common, x, horizon } => go!(common, cmd_encode(&common, &x, horizon)),
        Command::Decode { common, digits, depth } => go!(common, cmd_decode(&common, &digits, depth)),
        Command::Convert { common, digits, to } => go!(common, cmd_convert(&common, &digits, to)),
        Command::Shift {
            common,
            digits,
            x,
            k,
            delete,
        } => go!(common, cmd_shift(&common, digits, x, k, delete)),
        Command::Cylinder { common, base, x, rank } => go!(common, cmd_cylinder(&common, base, x, rank)),
        Command::Measure {
            common,
            positions,
            emit,
            rank,
        } => go!(common, cmd_measure(&common, &positions, emit, rank)),
        Command::Msum {
            common,
            s0,
            depth,
            emit,
        } => go!(common, cmd_msum(&common, &s0, depth, emit)),
        Command::Dim {
            common,
            alphabet,
            positions,
            s0,
            depth,
            grid,
        } => go!(common, cmd_dim(&common, alphabet, positions, s0, depth, grid)),
        Command::Rational {
            common,
            p,
            q,
            x,
            digits,
        } => go!(common, cmd_rational(&common, p, q, x, digits)),
        Command::Probe {
            common,
            x,
            digits,
            budget,
        } => go!(common, cmd_probe(&common, x, digits, budget)),
    }
}

/// Output settings carried out of the consumed command.
struct Format2 {
    format: Format,
    approx: Option<usize>,
}

fn basis_of(common: &Common) -> Result<Basis, InputError> {
    parse_basis(&common.basis)
}

fn digits_of(text: &str, basis: &Basis) -> Result<DigitString, InputError> {
    Ok(grammar::parse_digits(text)?.validate(basis)?)
}

fn rational_of(text: &str) -> Result<Rational, InputError> {
    Ok(grammar::parse_rational(text)?)
}

fn tail_json(d: &DigitString) -> Json {
    match d.tail() {
        negacantor::Tail::Zeros => json!("zeros"),
        negacantor::Tail::Truncated => json!("trunc"),
        negacantor::Tail::Periodic(p) => json!({ "periodic": p }),
    }
}

fn digits_json(d: &DigitString) -> Map<String, Json> {
    let mut m = Map::new();
    m.insert("digits".into(), json!(d.prefix()));
    m.insert("tail".into(), tail_json(d));
    m.insert("kind".into(), json!(d.kind().name()));
    m
}

fn value_json(v: &Value) -> Json {
    match v {
        Value::Exact(x) => json!(rat(x)),
        Value::Enclosure(iv) => json!({"lo": rat(iv.lo()), "hi": rat(iv.hi())}),
    }
}

/// Exact value when available, otherwise an enclosure from `depth` terms.
fn value_of(d: &DigitString, basis: &Basis, depth: usize) -> Result<Value, InputError> {
    match evaluate(d, basis, Mode::Exact) {
        Err(negacantor::Error::ExactUnavailable) => Ok(evaluate(d, basis, Mode::Interval(depth))?),
        other => Ok(other?),
    }
}

fn cmd_encode(common: &Common, x: &str, horizon: usize) -> Out {
    let basis = basis_of(common)?;
    let x = rational_of(x)?;
    let r = encode_with(&x, &basis, EncodeOptions::new(horizon))?;
    Ok(Report::json(json!({
        "digits": r.digits.prefix(),
        "tail": tail_json(&r.digits),
        "class": r.classification.name(),
    })))
}

fn cmd_decode(common: &Common, digits: &str, depth: usize) -> Out {
    let basis = basis_of(common)?;
    let d = digits_of(digits, &basis)?;
    Ok(Report::json(match value_of(&d, &basis, depth)? {
        Value::Exact(x) => json!({ "value": rat(&x) }),
        enclosure => value_json(&enclosure),
    }))
}

fn with_value(d: &DigitString, basis: &Basis) -> Json {
    let mut m = digits_json(d);
    if let Ok(v) = value_of(d, basis, negacantor::series::DEFAULT_DEPTH) {
        m.insert("value".into(), value_json(&v));
    }
    Json::Object(m)
}

fn cmd_convert(common: &Common, digits: &str, to: ConvertTo) -> Out {
    let basis = basis_of(common)?;
    let d = digits_of(digits, &basis)?;
    let doc = match to {
        ConvertTo::Negadn => with_value(&negadn_of_negad(&d, &basis)?, &basis),
        ConvertTo::Negad => with_value(&negad_of_negadn(&d, &basis)?, &basis),
        ConvertTo::Canonical => with_value(&canonicalize(&d, &basis)?, &basis),
        ConvertTo::EvenComplement => with_value(&parity_complement(&d, &basis, Parity::Even)?, &basis),
        ConvertTo::OddComplement => with_value(&parity_complement(&d, &basis, Parity::Odd)?, &basis),
        ConvertTo::Twin => match twin(&d, &basis)? {
            Some(t) => json!({ "twin": with_value(&t, &basis) }),
            None => json!({ "twin": null }),
        },
        ConvertTo::Compress => {
            let (c, cb) = pair_compress(&d, &basis)?;
            let mut m = match with_value(&c, cb.basis()) {
                Json::Object(m) => m,
                _ => unreachable!(),
            };
            m.insert("basis".into(), json!(cb.basis().to_string()));
            Json::Object(m)
        }
        ConvertTo::Split => {
            let (odd, even) = parity_split(&d);
            json!({ "odd": with_value(&odd, &basis), "even": with_value(&even, &basis) })
        }
    };
    Ok(Report::json(doc))
}

fn cmd_shift(common: &Common, digits: Option<String>, x: Option<String>, k: usize, delete: Option<usize>) -> Out {
    let basis = basis_of(common)?;
    if let Some(x) = x {
        let y = shift_value(&rational_of(&x)?, &basis, k)?;
        return Ok(Report::json(json!({ "value": rat(&y) })));
    }
    let d = digits_of(digits.as_deref().unwrap_or_default(), &basis)?;
    let r = match delete {
        Some(m) => shift_delete(&d, &basis, m)?,
        None => shift(&d, &basis, k)?,
    };
    let mut m = digits_json(&r.digits);
    m.insert("basis".into(), json!(r.basis.to_string()));
    m.insert("value".into(), value_json(&r.value));
    Ok(Report::json(Json::Object(m)))
}

fn cmd_cylinder(common: &Common, base: Option<String>, x: Option<String>, rank: Option<usize>) -> Out {
    let basis = basis_of(common)?;
    let base = match (base, x) {
        (Some(b), _) => CylinderBase::new(grammar::parse_list(&b, 0)?, &basis)?,
        (None, Some(x)) => locate(&rational_of(&x)?, &basis, rank.unwrap_or(0))?,
        (None, None) => unreachable!("clap requires one of base and x"),
    };
    let iv = cylinder(&base, &basis)?;
    Ok(Report::json(json!({
        "base": base.digits(),
        "lo": rat(iv.lo()),
        "hi": rat(iv.hi()),
        "length": rat(&iv.width()),
    })))
}

fn cover_table(rank: usize, mut rows: Vec<(Rational, Rational)>) -> Table {
    rows.sort();
    Table::new(
        &["rank", "lo", "hi", "length"],
        rows.into_iter()
            .map(|(lo, hi)| {
                let len = &hi - &lo;
                vec![Cell::Int(rank as u64), Cell::Rat(lo), Cell::Rat(hi), Cell::Rat(len)]
            })
            .collect(),
    )
}

fn cmd_measure(common: &Common, positions: &str, emit: CoverEmit, rank: Option<usize>) -> Out {
    let basis = basis_of(common)?;
    let c = PositionConstraint::new(grammar::parse_positions(positions)?, &basis)?;
    let stats = position_set_stats(&c, &basis)?;
    if emit == CoverEmit::Summary {
        return Ok(Report::json(json!({
            "measure": rat(&stats.measure),
            "diameter": rat(&stats.diameter),
        })));
    }
    let rank = rank.unwrap_or(c.max_position());
    let bases = position_set_cover(&c, &basis, rank, common.opts())?;
    let mut rows = Vec::with_capacity(bases.len());
    let mut items = Vec::with_capacity(bases.len());
    for b in &bases {
        let iv = cylinder(b, &basis)?;
        items.push((iv.lo().clone(), b.digits().to_vec(), iv.hi().clone()));
        rows.push((iv.lo().clone(), iv.hi().clone()));
    }
    items.sort();
    let total = rows.iter().fold(Rational::from_integer(0.into()), |a, (l, h)| a + (h - l));
    let doc = json!({
        "rank": rank,
        "count": bases.len(),
        "measure": rat(&stats.measure),
        "total_length": rat(&total),
        "cylinders": items.iter().map(|(lo, b, hi)| json!({"base": b, "lo": rat(lo), "hi": rat(hi)})).collect::<Vec<_>>(),
    });
    Ok(Report::with_table(doc, cover_table(rank, rows)))
}

fn class_json(class: &Ms0Class) -> Map<String, Json> {
    let mut m = Map::new();
    m.insert("class".into(), json!(class.name()));
    match class {
        Ms0Class::FiniteSet { nonzero } => {
            m.insert("nonzero".into(), json!(nonzero));
        }
        Ms0Class::FullSegment(iv) => {
            m.insert("lo".into(), json!(rat(iv.lo())));
            m.insert("hi".into(), json!(rat(iv.hi())));
        }
        Ms0Class::UnclassifiedEmpirical(s) => {
            m.insert("depth".into(), json!(s.depth));
            m.insert("intervals".into(), json!(s.intervals));
            m.insert("total_length".into(), json!(rat(&s.total_length)));
        }
        _ => {}
    }
    m
}

fn cmd_msum(common: &Common, s0: &str, depth: usize, emit: MsumEmit) -> Out {
    let basis = basis_of(common)?;
    let spec = IncompleteSumSpec::new(digits_of(s0, &basis)?, basis)?;
    match emit {
        MsumEmit::Class => Ok(Report::json(Json::Object(class_json(&ms0_classify(&spec)?)))),
        MsumEmit::Summary => {
            let top = ms0_cylinder(&spec, &[])?;
            let mut m = class_json(&ms0_classify(&spec)?);
            m.insert("lo".into(), json!(rat(top.lo())));
            m.insert("hi".into(), json!(rat(top.hi())));
            m.insert("depth".into(), json!(depth));
            m.insert("total_length".into(), json!(rat(&ms0_total_length(&spec, depth)?)));
            Ok(Report::json(Json::Object(m)))
        }
        MsumEmit::Cover => {
            let cover = ms0_cover(&spec, depth, common.opts())?;
            let mut items: Vec<_> = cover
                .intervals
                .iter()
                .map(|(b, iv)| (iv.lo().clone(), b.digits().to_vec(), iv.hi().clone()))
                .collect();
            items.sort();
            let rows = items.iter().map(|(l, _, h)| (l.clone(), h.clone())).collect();
            let doc = json!({
                "depth": depth,
                "count": items.len(),
                "total_length": rat(&cover.total_length),
                "intervals": items.iter().map(|(lo, b, hi)| json!({"selection": b, "lo": rat(lo), "hi": rat(hi)})).collect::<Vec<_>>(),
            });
            Ok(Report::with_table(doc, cover_table(depth, rows)))
        }
        MsumEmit::Gaps => {
            let cover = ms0_cover(&spec, depth, common.opts())?;
            let table = Table::new(
                &["level", "pairs", "width"],
                cover
                    .gaps
                    .iter()
                    .map(|g| vec![Cell::Int(g.level as u64), Cell::Int(g.pairs), Cell::Rat(g.width.clone())])
                    .collect(),
            );
            let doc = json!({
                "depth": depth,
                "gaps": cover.gaps.iter().map(|g| json!({"level": g.level, "pairs": g.pairs, "width": rat(&g.width)})).collect::<Vec<_>>(),
            });
            Ok(Report::with_table(doc, table))
        }
    }
}

fn cmd_dim(
    common: &Common,
    alphabet: Option<String>,
    positions: Option<String>,
    s0: Option<String>,
    depth: usize,
    grid: Option<String>,
) -> Out {
    let basis = basis_of(common)?;
    let target = match (alphabet, positions, s0) {
        (Some(a), _, _) => CoverTarget::DigitAlphabet(grammar::parse_list(&a, 0)?),
        (_, Some(p), _) => {
            CoverTarget::PositionFamily(PositionConstraint::new(grammar::parse_positions(&p)?, &basis)?)
        }
        (_, _, Some(s)) => CoverTarget::IncompleteSum(IncompleteSumSpec::new(digits_of(&s, &basis)?, basis.clone())?),
        _ => return Err(InputError::Usage("one of --alphabet, --positions, --s0 is required".into())),
    };
    let grid = match grid {
        Some(g) => grammar::parse_grid(&g)?,
        None => default_grid(),
    };
    let est = dimension_estimate(&target, &basis, depth, &grid, common.opts())?;
    let constant = match u64::try_from(est.comparison_constant) {
        Ok(v) => json!(v),
        Err(_) => json!(est.comparison_constant.to_string()),
    };
    let doc = json!({
        "estimate": est.estimate,
        "gate": est.faithful_gate,
        "comparison_constant": constant,
        "depth": est.depth,
        "cylinders": est.cylinders,
        "covering_sums": est.covering_sums.iter().map(|c| json!({"alpha": c.alpha, "log_sum": c.log_sum, "sum": c.sum})).collect::<Vec<_>>(),
    });
    let table = Table::new(
        &["alpha", "log_sum", "sum"],
        est.covering_sums
            .iter()
            .map(|c| vec![Cell::Num(c.alpha), Cell::Num(c.log_sum), Cell::Num(c.sum)])
            .collect(),
    );
    Ok(Report::with_table(doc, table))
}

fn cmd_rational(
    common: &Common,
    p: Option<String>,
    q: Option<String>,
    x: Option<String>,
    digits: Option<String>,
) -> Out {
    let basis = basis_of(common)?;
    if let Some(d) = digits {
        let d = digits_of(&d, &basis)?;
        return Ok(Report::json(json!({ "nega_d_rational": is_nega_d_rational(&d, &basis)? })));
    }
    let x = match (x, q) {
        (Some(x), _) => rational_of(&x)?,
        (None, Some(q)) => rational_of(&format!("{}/{}", p.as_deref().unwrap_or("1"), q))?,
        (None, None) => return Err(InputError::Usage("one of --q, --x, --digits is required".into())),
    };
    let n0 = finite_expansion(&x, &basis);
    Ok(Report::json(json!({ "finite_expansion": n0.is_some(), "n0": n0 })))
}

const DEFAULT_BUDGET: usize = 256;
const MAX_DEFAULT_BUDGET: usize = 1 << 16;

fn cmd_probe(common: &Common, x: Option<String>, digits: Option<String>, budget: Option<usize>) -> Out {
    let basis = basis_of(common)?;
    let input = match (x, digits) {
        (Some(x), _) => ProbeInput::Value(rational_of(&x)?),
        (None, Some(d)) => ProbeInput::Digits(digits_of(&d, &basis)?),
        (None, None) => unreachable!("clap requires one of x and digits"),
    };
    let budget = budget.unwrap_or_else(|| match &input {
        ProbeInput::Value(x) => state_bound(x, &basis).map_or(DEFAULT_BUDGET, |b| b.min(MAX_DEFAULT_BUDGET)),
        ProbeInput::Digits(_) => DEFAULT_BUDGET,
    });
    Ok(Report::json(match rationality_probe(&input, &basis, budget)? {
        Probe::RationalWitness { k, t } => json!({ "repeat": true, "k": k, "t": t }),
        Probe::NoRepeatWithinBudget => json!({ "repeat": false, "budget": budget }),
    }))
}
