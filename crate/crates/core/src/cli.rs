//! Command-line front end. Every subcommand prints one JSON document on
//! standard output (or to `--out`) and a short summary on standard error.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use crate::arith::{format_rational, parse_rational, Rational};
use crate::error::{Error, Result};
use crate::fqm::{isotropic_subgroups, DescribedForm, Element, FiniteQuadraticModule, FormDescriptor, JordanSymbol, Subgroup};
use crate::lifts::{
    build_lift_system, check_group_structure, check_homomorphism, check_theorem, corollary_for, kernel_down, rank_up,
    surjectivity_certificate,
};
use crate::oldnew::{is_oldform, split, CoeffTable};
use crate::weil::{all_passed, verify_gamma_trivial, verify_relations, CheckReport};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Parser, Debug)]
#[command(name = "discform", version, about = "Discriminant forms, Weil representations and old/new form splitting")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Write the JSON result to this file instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Refuse exhaustive work on forms with more elements than this.
    #[arg(long, global = true, default_value_t = 100_000)]
    pub max_size: u64,
    /// Worker threads for parallel steps.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
}

#[derive(Args, Debug, Clone)]
pub struct FormArgs {
    /// Jordan symbol such as "3^1:a=1+2^1:A".
    #[arg(long, conflicts_with = "lattice")]
    pub jordan: Option<String>,
    /// JSON file with a form descriptor: an even lattice {"gram": [[..]]},
    /// an explicit module, or a Jordan symbol string.
    #[arg(long)]
    pub lattice: Option<PathBuf>,
}

#[derive(Args, Debug, Clone)]
pub struct SubgroupArgs {
    /// "all", "max-order=<k>", or a JSON file listing generator sets.
    #[arg(long, default_value = "all")]
    pub subgroups: String,
    /// Also use the trivial subgroup.
    #[arg(long)]
    pub include_trivial: bool,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Order, level, signature and presentation of a form.
    FqmInfo {
        #[command(flatten)]
        form: FormArgs,
    },
    /// Enumerate isotropic subgroups.
    Isotropic {
        #[command(flatten)]
        form: FormArgs,
        #[command(flatten)]
        subgroups: SubgroupArgs,
    },
    /// Check the defining relations, unitarity and triviality on Γ(N).
    WeilVerify {
        #[command(flatten)]
        form: FormArgs,
        #[arg(long, default_value_t = 5)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Check adjointness, duality and the intertwining identities of the lift maps.
    LiftsCheck {
        #[command(flatten)]
        form: FormArgs,
        #[command(flatten)]
        subgroups: SubgroupArgs,
        /// Skip the Weil representation intertwining checks.
        #[arg(long)]
        no_weil: bool,
    },
    /// Old and new solution spaces of a coefficient table.
    OldnewSplit {
        /// JSON coefficient table of a basis of solutions.
        #[arg(long)]
        table: PathBuf,
        #[command(flatten)]
        subgroups: SubgroupArgs,
    },
    /// Oldform verdict for each basis form, or for one combination.
    Detect {
        /// JSON coefficient table of a basis of solutions.
        #[arg(long)]
        table: PathBuf,
        #[command(flatten)]
        subgroups: SubgroupArgs,
        /// Comma separated coefficients λ_i such as "1,0,-1/2".
        #[arg(long)]
        lambda: Option<String>,
    },
    /// Explicit preimages of every basis vector under the up map.
    Certify {
        #[command(flatten)]
        form: FormArgs,
        /// Also assemble the lift system on all subgroups used and confirm it is onto.
        #[arg(long)]
        check_system: bool,
    },
    /// Evaluate the hypotheses on the Jordan constituents and the |D| ≥ N^9 gate.
    TheoremCheck {
        #[command(flatten)]
        form: FormArgs,
    },
}

/// Exit code for an error: validation 2, I/O 3, size 4, anything else 1.
pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::Validation(_)
        | Error::Input(_)
        | Error::Json(_)
        | Error::NotEven(_)
        | Error::DegenerateLattice
        | Error::DegenerateForm(_)
        | Error::NotIsotropic
        | Error::OddSignature(_)
        | Error::NotInSl2(_)
        | Error::Hypothesis(_) => 2,
        Error::Io(_) => 3,
        Error::Size(_) => 4,
        _ => 1,
    }
}

pub fn main() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match run(&cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

/// Runs a parsed command and writes its output.
pub fn run(cli: &Cli) -> Result<()> {
    if let Some(n) = cli.threads {
        // a pool set up earlier in the same process is kept
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global();
    }
    let (value, summary) = execute(&cli.command, cli.max_size)?;
    let text = render(value);
    match &cli.out {
        Some(path) => fs::write(path, text + "\n")?,
        None => {
            let mut out = std::io::stdout().lock();
            match writeln!(out, "{text}") {
                // a closed pipe is the reader's choice
                Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => return Ok(()),
                r => r?,
            }
        }
    }
    eprintln!("{summary}");
    Ok(())
}

/// Pretty JSON with `schema_version` added.
pub fn render(mut value: Value) -> String {
    if let Value::Object(map) = &mut value {
        map.insert("schema_version".into(), json!(SCHEMA_VERSION));
    }
    serde_json::to_string_pretty(&value).expect("json values serialize")
}

/// Computes the JSON result and the summary line of a command.
pub fn execute(command: &Command, max_size: u64) -> Result<(Value, String)> {
    match command {
        Command::FqmInfo { form } => fqm_info(form, max_size),
        Command::Isotropic { form, subgroups } => isotropic(form, subgroups, max_size),
        Command::WeilVerify { form, samples, seed } => weil_verify(form, *samples, *seed, max_size),
        Command::LiftsCheck { form, subgroups, no_weil } => lifts_check(form, subgroups, *no_weil, max_size),
        Command::OldnewSplit { table, subgroups } => oldnew_split(table, subgroups, max_size),
        Command::Detect { table, subgroups, lambda } => detect(table, subgroups, lambda.as_deref(), max_size),
        Command::Certify { form, check_system } => certify(form, *check_system, max_size),
        Command::TheoremCheck { form } => theorem(form),
    }
}

fn read(path: &Path) -> Result<String> {
    Ok(fs::read_to_string(path)?)
}

fn read_descriptor(path: &Path) -> Result<FormDescriptor> {
    let value: Value = serde_json::from_str(&read(path)?)?;
    let value = match value {
        Value::Array(_) => json!({ "gram": value }),
        other => other,
    };
    Ok(serde_json::from_value(value)?)
}

fn parse_symbol(text: &str) -> Result<JordanSymbol> {
    text.parse()
}

fn load_form(args: &FormArgs, max_size: u64) -> Result<DescribedForm> {
    let form = match (&args.jordan, &args.lattice) {
        (Some(text), _) => {
            let symbol = parse_symbol(text)?;
            check_order(symbol.group_order(), max_size)?;
            DescribedForm::from(&symbol)
        }
        (None, Some(path)) => {
            let descriptor = read_descriptor(path)?;
            if let FormDescriptor::Jordan(text) = &descriptor {
                check_order(parse_symbol(text)?.group_order(), max_size)?;
            }
            DescribedForm::new(descriptor)?
        }
        (None, None) => return Err(Error::validation("one of --jordan or --lattice is required")),
    };
    check_order(Some(form.module.order()), max_size)?;
    Ok(form)
}

fn check_order(order: Option<u64>, max_size: u64) -> Result<()> {
    match order {
        Some(n) if n <= max_size => Ok(()),
        Some(n) => Err(Error::Size(format!("|D| = {n} exceeds --max-size {max_size}"))),
        None => Err(Error::Size("|D| overflows u64".into())),
    }
}

fn select_subgroups(d: &FiniteQuadraticModule, args: &SubgroupArgs, max_size: u64) -> Result<Vec<Subgroup>> {
    let spec = args.subgroups.trim();
    let mut subs = if spec == "all" {
        isotropic_subgroups(d, args.include_trivial, None, max_size)?
    } else if let Some(k) = spec.strip_prefix("max-order=") {
        let k: usize = k.trim().parse().map_err(|_| Error::validation(format!("bad subgroup bound {k:?}")))?;
        isotropic_subgroups(d, args.include_trivial, Some(k), max_size)?
    } else {
        let gens: Vec<Vec<Vec<u64>>> = serde_json::from_str(&read(Path::new(spec))?)?;
        let mut out = Vec::new();
        for (i, set) in gens.iter().enumerate() {
            let elems = set
                .iter()
                .map(|c| {
                    if c.len() != d.rank() || c.iter().zip(d.orders()).any(|(x, o)| x >= o) {
                        Err(Error::validation(format!("subgroup {i}: generator {c:?} is not reduced coordinates of D")))
                    } else {
                        Ok(Element::new(c.clone()))
                    }
                })
                .collect::<Result<Vec<_>>>()?;
            let h = Subgroup::generated(d, &elems)?;
            if !h.is_isotropic(d) {
                return Err(Error::validation(format!("subgroup {i} is not isotropic")));
            }
            out.push(h);
        }
        out
    };
    if !args.include_trivial {
        subs.retain(|h| !h.is_trivial());
    }
    Ok(subs)
}

fn subgroup_json(h: &Subgroup) -> Value {
    json!({
        "order": h.order(),
        "generators": h.generators().iter().map(|g| g.coords.clone()).collect::<Vec<_>>(),
        "elements": h.indices(),
    })
}

fn fqm_info(args: &FormArgs, max_size: u64) -> Result<(Value, String)> {
    let form = load_form(args, max_size)?;
    let d = &form.module;
    let signature = d.signature()?;
    let value = json!({
        "form": form.descriptor,
        "order": d.order(),
        "level": d.level(),
        "signature": signature,
        "orders": d.orders(),
        "gram": d.gram().iter().map(|r| r.iter().map(|x| x.to_string()).collect::<Vec<_>>()).collect::<Vec<_>>(),
        "q": d.qvals().iter().map(|x| x.to_string()).collect::<Vec<_>>(),
    });
    Ok((value, format!("|D| = {}, level {}, signature {signature}", d.order(), d.level())))
}

fn isotropic(args: &FormArgs, sub: &SubgroupArgs, max_size: u64) -> Result<(Value, String)> {
    let form = load_form(args, max_size)?;
    let subs = select_subgroups(&form.module, sub, max_size)?;
    let value = json!({
        "order": form.module.order(),
        "count": subs.len(),
        "subgroups": subs.iter().map(subgroup_json).collect::<Vec<_>>(),
    });
    Ok((value, format!("{} isotropic subgroups", subs.len())))
}

fn reports_json(reports: &[CheckReport]) -> Value {
    serde_json::to_value(reports).expect("reports serialize")
}

fn weil_verify(args: &FormArgs, samples: usize, seed: u64, max_size: u64) -> Result<(Value, String)> {
    let form = load_form(args, max_size)?;
    let relations = verify_relations(&form.module)?;
    let gamma = verify_gamma_trivial(&form.module, samples, seed)?;
    let passed = all_passed(&relations) && all_passed(&gamma);
    let value = json!({
        "order": form.module.order(),
        "level": form.module.level(),
        "relations": reports_json(&relations),
        "gamma_trivial": reports_json(&gamma),
        "passed": passed,
    });
    let total = relations.len() + gamma.len();
    Ok((value, format!("{} of {total} checks passed", relations.iter().chain(&gamma).filter(|r| r.passed()).count())))
}

fn lifts_check(args: &FormArgs, sub: &SubgroupArgs, no_weil: bool, max_size: u64) -> Result<(Value, String)> {
    let form = load_form(args, max_size)?;
    let d = &form.module;
    let subs = select_subgroups(d, sub, max_size)?;
    let system = build_lift_system(d, &subs, sub.include_trivial)?;
    let down = system.down_matrix();
    let up = system.up_matrix();
    let adjoint = (0..system.rows()).all(|r| (0..system.cols()).all(|g| down[r][g] == up[g][r]));
    let kernel_dim = kernel_down(&system).len();
    let rank = rank_up(&system);
    let duality = kernel_dim + rank == system.cols();
    let mut homomorphism = Vec::new();
    let mut passed = adjoint && duality;
    if !no_weil {
        for (i, h) in subs.iter().enumerate() {
            let reports = check_homomorphism(d, h)?;
            passed &= all_passed(&reports);
            homomorphism.push(json!({ "subgroup": i, "passed": all_passed(&reports), "reports": reports_json(&reports) }));
        }
    }
    let value = json!({
        "order": d.order(),
        "subgroups": subs.iter().map(subgroup_json).collect::<Vec<_>>(),
        "rows": system.rows(),
        "cols": system.cols(),
        "adjoint": adjoint,
        "kernel_dim": kernel_dim,
        "rank_up": rank,
        "duality": duality,
        "up_surjective": rank == system.cols(),
        "homomorphism": homomorphism,
        "passed": passed,
    });
    Ok((value, format!("{} subgroups, dim ker(↓) = {kernel_dim}, rank(↑) = {rank}, passed = {passed}", subs.len())))
}

fn load_table(path: &Path, max_size: u64) -> Result<CoeffTable> {
    let table = CoeffTable::from_json(&read(path)?)?;
    check_order(Some(table.module().order()), max_size)?;
    Ok(table)
}

fn oldnew_split(path: &Path, sub: &SubgroupArgs, max_size: u64) -> Result<(Value, String)> {
    let table = load_table(path, max_size)?;
    let subs = select_subgroups(table.module(), sub, max_size)?;
    let system = build_lift_system(table.module(), &subs, sub.include_trivial)?;
    let report = split(&table, &system)?;
    let summary = format!(
        "{} forms: old dimension {}, new dimension {}, up to n = {}{}",
        table.len(),
        report.old_basis.len(),
        report.new_basis.len(),
        report.truncated_at,
        if report.float_mode { " (float input)" } else { "" }
    );
    Ok((serde_json::to_value(&report)?, summary))
}

fn parse_lambda(text: &str) -> Result<Vec<Rational>> {
    text.split(',').map(parse_rational).collect()
}

fn detect(path: &Path, sub: &SubgroupArgs, lambda: Option<&str>, max_size: u64) -> Result<(Value, String)> {
    let table = load_table(path, max_size)?;
    let subs = select_subgroups(table.module(), sub, max_size)?;
    let system = build_lift_system(table.module(), &subs, sub.include_trivial)?;
    let m = table.len();
    let unit = |i: usize| -> Vec<Rational> { (0..m).map(|j| Rational::from_integer(((i == j) as i64).into())).collect() };
    let mut verdicts = Vec::new();
    for i in 0..m {
        verdicts.push(json!({ "form": i, "old": is_oldform(&table, &unit(i), &system)? }));
    }
    let mut value = json!({
        "verdicts": verdicts,
        "truncated_at": table.sturm,
        "float_mode": table.float_mode,
    });
    let mut summary = format!("{} of {m} basis forms old up to n = {}", verdicts.iter().filter(|v| v["old"] == true).count(), table.sturm);
    if let Some(text) = lambda {
        let l = parse_lambda(text)?;
        let old = is_oldform(&table, &l, &system)?;
        value["lambda"] = json!(l.iter().map(format_rational).collect::<Vec<_>>());
        value["old"] = json!(old);
        summary = format!("combination is {} up to n = {}", if old { "old" } else { "not old" }, table.sturm);
    }
    Ok((value, summary))
}

fn certify(args: &FormArgs, check_system: bool, max_size: u64) -> Result<(Value, String)> {
    let text = args
        .jordan
        .as_ref()
        .ok_or_else(|| Error::validation("certify needs --jordan: the hypotheses are read off the Jordan constituents"))?;
    let symbol = parse_symbol(text)?;
    check_order(symbol.group_order(), max_size)?;
    let cert = surjectivity_certificate(&symbol, check_system)?;
    let summary = format!(
        "hypothesis {} on the {}^{} part: {} preimages, {} subgroups{}",
        cert.hypothesis.map_or("none", |h| h.label()),
        cert.part.p,
        cert.part.e,
        cert.elements.len(),
        cert.subgroup_count,
        if cert.system_checked { ", system onto" } else { "" }
    );
    Ok((serde_json::to_value(&cert)?, summary))
}

fn theorem(args: &FormArgs) -> Result<(Value, String)> {
    let (parts, fired, corollary) = match (&args.jordan, &args.lattice) {
        (Some(text), _) => {
            let c = check_theorem(&parse_symbol(text)?);
            (c.parts, c.fired, c.corollary)
        }
        (None, Some(path)) => {
            let d = DescribedForm::new(read_descriptor(path)?)?.module;
            let (parts, fired) = check_group_structure(&d);
            (parts, fired, corollary_for(&d))
        }
        (None, None) => return Err(Error::validation("one of --jordan or --lattice is required")),
    };
    let summary = match &fired {
        Some(f) => format!("hypothesis {} holds on the {}^{} part", f.hypothesis.label(), f.p, f.j),
        None if corollary.multiplicity_at_least_9 => {
            "no hypothesis holds, although some cyclic factor has multiplicity ≥ 9".to_string()
        }
        None => "no hypothesis holds".to_string(),
    };
    let value = json!({
        "parts": parts,
        "fired": fired.map(|f| json!({ "hypothesis": f.hypothesis, "label": f.hypothesis.label(), "p": f.p, "j": f.j })),
        "corollary": corollary,
        "from_jordan_symbol": args.jordan.is_some(),
    });
    Ok((value, summary))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &[&str]) -> Result<Value> {
        let cli = Cli::try_parse_from(std::iter::once("discform").chain(args.iter().copied())).unwrap();
        let (v, _) = execute(&cli.command, cli.max_size)?;
        Ok(v)
    }

    #[test]
    fn fqm_info_on_plane() {
        let v = run_args(&["fqm-info", "--jordan", "2^1:A"]).unwrap();
        assert_eq!(v["order"], 4);
        assert_eq!(v["level"], 2);
        assert_eq!(v["signature"], 0);
    }

    #[test]
    fn theorem_check_seven_ternary() {
        let sym = vec!["3^1:a=1"; 7].join("+");
        let v = run_args(&["theorem-check", "--jordan", &sym]).unwrap();
        assert_eq!(v["fired"]["label"], "(i)");
    }

    #[test]
    fn exit_codes() {
        let e = run_args(&["fqm-info", "--jordan", "4^1:a=1"]).unwrap_err();
        assert_eq!(exit_code(&e), 2);
        let e = run_args(&["fqm-info", "--jordan", "3^1:a=1", "--max-size", "2"]).unwrap_err();
        assert_eq!(exit_code(&e), 4);
        let e = run_args(&["oldnew-split", "--table", "/nonexistent/table.json"]).unwrap_err();
        assert_eq!(exit_code(&e), 3);
        let e = run_args(&["certify", "--jordan", "3^1:a=1"]).unwrap_err();
        assert_eq!(exit_code(&e), 2);
    }

    #[test]
    fn isotropic_and_lifts_check() {
        let v = run_args(&["isotropic", "--jordan", "2^1:A"]).unwrap();
        assert_eq!(v["count"], 2);
        let v = run_args(&["lifts-check", "--jordan", "2^1:A+2^1:A", "--subgroups", "max-order=2"]).unwrap();
        assert_eq!(v["passed"], true);
        assert_eq!(v["adjoint"], true);
    }

    #[test]
    fn rendering_is_deterministic() {
        let a = render(run_args(&["fqm-info", "--jordan", "3^1:a=1+2^1:B"]).unwrap());
        let b = render(run_args(&["fqm-info", "--jordan", "3^1:a=1+2^1:B"]).unwrap());
        assert_eq!(a, b);
        assert!(a.contains("\"schema_version\": 1"));
    }
}
