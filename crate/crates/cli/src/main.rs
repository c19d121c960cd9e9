//! `spbdiv`: cusp types, special boundary divisors and eta identities from the command line.
//!
//! Every command prints one JSON document on stdout. Failures print a single line
//! `error: <kind>: <message>` on stderr and exit with 2 (bad input), 3 (size guard)
//! or 4 (internal error).

use std::panic;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};
use spbdiv::arith::{rat, rat_int};
use spbdiv::cusps::{self, boundary_width, cusp_classes, enumerate_types, types_count_formula};
use spbdiv::divisors::{self, is_special, special_divisor};
use spbdiv::invariants::{invariant_space_dim, relation_report, types_span, types_span_dimension_formula};
use spbdiv::json;
use spbdiv::qeta::{self, cross_validate_boundary, eta_expansion, eta_identity_check, lifted_eta_identity_check, psi_factors};
use spbdiv::{BoundaryDivisor, CuspLabel, DiscriminantForm, Error, FqmSubgroup, Guard, PsiConvention, Star};

#[derive(Parser)]
#[command(name = "spbdiv", version, about = "Cusp types, special boundary divisors and eta identities")]
struct Cli {
    /// Seed for randomized sampling.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Indent the JSON output.
    #[arg(long, global = true)]
    pretty: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Copy)]
struct FormArgs {
    #[arg(long = "N")]
    n: i64,
    #[arg(long = "Nprime", default_value_t = 1)]
    nprime: i64,
}

impl FormArgs {
    fn form(self) -> Result<DiscriminantForm, CliError> {
        Ok(DiscriminantForm::new(self.n, self.nprime)?)
    }
}

#[derive(Args, Clone, Copy)]
struct LabelArgs {
    #[arg(long, default_value_t = 1)]
    star: u8,
    #[arg(long)]
    a: i64,
    #[arg(long)]
    c: i64,
}

impl LabelArgs {
    fn label(self) -> Result<CuspLabel, CliError> {
        let star = Star::try_from(self.star).map_err(|_| CliError::usage("--star must be 1 or 2"))?;
        Ok(CuspLabel::normalized(star, self.a, self.c)?)
    }
}

#[derive(ValueEnum, Clone, Copy, Default)]
enum Convention {
    #[default]
    Consistent,
    AsPrinted,
}

impl From<Convention> for PsiConvention {
    fn from(c: Convention) -> Self {
        match c {
            Convention::Consistent => PsiConvention::Consistent,
            Convention::AsPrinted => PsiConvention::AsPrinted,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Types and cusp classes of a form.
    Cusps {
        #[command(flatten)]
        form: FormArgs,
        #[arg(long)]
        classes: bool,
        #[arg(long)]
        types: bool,
        #[arg(long)]
        count: bool,
    },
    /// Number of types.
    Types {
        #[command(flatten)]
        form: FormArgs,
        /// Also list the types with their witnesses.
        #[arg(long)]
        list: bool,
    },
    /// Invariant space and the span of the types.
    Invariants {
        #[command(flatten)]
        form: FormArgs,
        #[arg(long)]
        dim: bool,
        #[arg(long)]
        span: bool,
        #[arg(long)]
        relations: bool,
    },
    /// The prime-power relation among types for `N = p^r`, `N' = p^r'`.
    Relations {
        #[arg(long)]
        p: i64,
        #[arg(long)]
        r: u32,
        #[arg(long)]
        rprime: u32,
    },
    /// The special divisor of a self-dual isotropic subgroup.
    Zdiv(SubgroupArgs),
    /// Decides whether a divisor read from a file is special.
    IsSpecial(FileArgs),
    /// Weyl vector components of a subgroup at cusp classes.
    Weyl {
        #[command(flatten)]
        subgroup: SubgroupArgs,
        #[arg(long)]
        star: Option<u8>,
        #[arg(long, requires = "c")]
        a: Option<i64>,
        #[arg(long, requires = "a")]
        c: Option<i64>,
    },
    /// Eta-quotient expansions.
    #[command(subcommand)]
    Eta(EtaCommand),
    /// Orders of the eta quotient of a type against its special divisor.
    CrossValidate {
        #[command(flatten)]
        subgroup: SubgroupArgs,
        #[arg(long, value_enum, default_value_t)]
        convention: Convention,
    },
    /// Boundary divisors.
    #[command(subcommand)]
    Divisor(DivisorCommand),
}

#[derive(Args)]
struct SubgroupArgs {
    #[command(flatten)]
    form: FormArgs,
    /// Generators as `[[w,x,y,z],...]` or `{"generators": [...]}`.
    #[arg(long = "H")]
    h: String,
}

#[derive(Args)]
struct FileArgs {
    #[command(flatten)]
    form: FormArgs,
    #[arg(long)]
    file: PathBuf,
}

#[derive(Subcommand)]
enum EtaCommand {
    /// The prime-power eta identity.
    Identity {
        #[arg(long)]
        p: i64,
        #[arg(long)]
        r: u32,
        #[arg(long, default_value_t = 50)]
        terms: u64,
        /// Check the norm identity over primitive matrices instead.
        #[arg(long)]
        lifted: bool,
    },
    /// Expansion of the eta product attached to the type of a cusp.
    Psi {
        #[command(flatten)]
        form: FormArgs,
        #[command(flatten)]
        label: LabelArgs,
        #[arg(long, default_value_t = 10)]
        terms: u64,
        #[arg(long, value_enum, default_value_t)]
        convention: Convention,
    },
}

#[derive(Subcommand)]
enum DivisorCommand {
    #[command(name = "zH")]
    ZH(SubgroupArgs),
    IsSpecial(FileArgs),
    /// A random rational combination of special divisors.
    Sample {
        #[command(flatten)]
        form: FormArgs,
        /// Add a multiple of one class indicator so that the result is no longer special.
        #[arg(long)]
        perturb: bool,
    },
}

enum CliError {
    Usage(String),
    Library(Error),
}

impl CliError {
    fn usage(msg: impl Into<String>) -> Self {
        CliError::Usage(msg.into())
    }

    fn kind(&self) -> &'static str {
        match self {
            CliError::Usage(_) => "usage",
            CliError::Library(e) => match e {
                Error::InvalidParameter(_) => "invalid-parameter",
                Error::NotDualLattice(_) => "not-dual-lattice",
                Error::MismatchedForms => "mismatched-forms",
                Error::NotIsotropic => "not-isotropic",
                Error::NotSelfDualIsotropic => "not-self-dual-isotropic",
                Error::NotInvariant => "not-invariant",
                Error::GuardExceeded { .. } => "guard-exceeded",
                Error::UnsupportedFactor(_) => "unsupported-factor",
                Error::Internal(_) => "internal",
            },
        }
    }

    fn exit_code(&self) -> u8 {
        match self {
            CliError::Library(Error::GuardExceeded { .. }) => 3,
            CliError::Library(Error::Internal(_)) => 4,
            _ => 2,
        }
    }

    fn message(&self) -> String {
        match self {
            CliError::Usage(m) => m.clone(),
            CliError::Library(e) => e.to_string(),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Library(e)
    }
}

type Outcome = Result<Value, CliError>;

fn parse_subgroup(form: &DiscriminantForm, text: &str) -> Result<FqmSubgroup, CliError> {
    let v: Value = serde_json::from_str(text).map_err(|e| CliError::usage(format!("--H is not JSON: {e}")))?;
    let gens = match &v {
        Value::Array(_) => &v,
        Value::Object(o) => {
            for (key, want) in [("N", form.n()), ("Nprime", form.nprime())] {
                if let Some(got) = o.get(key) {
                    if got.as_i64() != Some(want) {
                        return Err(CliError::usage(format!("--H has {key} = {got}, expected {want}")));
                    }
                }
            }
            o.get("generators").ok_or_else(|| CliError::usage("--H lacks \"generators\""))?
        }
        _ => return Err(CliError::usage("--H must be an array or an object")),
    };
    let gens = gens
        .as_array()
        .ok_or_else(|| CliError::usage("generators must be an array"))?
        .iter()
        .map(|g| json::parse_element(form, g))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(FqmSubgroup::from_generators(*form, &gens))
}

fn read_divisor(args: &FileArgs, guard: &Guard) -> Result<(BoundaryDivisor, Vec<cusps::CuspClass>), CliError> {
    let form = args.form.form()?;
    let text = std::fs::read_to_string(&args.file)
        .map_err(|e| CliError::usage(format!("cannot read {}: {e}", args.file.display())))?;
    let v: Value = serde_json::from_str(&text).map_err(|e| CliError::usage(format!("{} is not JSON: {e}", args.file.display())))?;
    for (key, want) in [("N", form.n()), ("Nprime", form.nprime())] {
        if let Some(got) = v.get(key) {
            if got.as_i64() != Some(want) {
                return Err(CliError::usage(format!("divisor has {key} = {got}, expected {want}")));
            }
        }
    }
    let classes = cusp_classes(&form, guard)?;
    Ok((json::parse_divisor(&form, &classes, &v)?, classes))
}

fn type_entry(i: usize, h: &FqmSubgroup, witness: &CuspLabel) -> Value {
    json!({
        "index": i,
        "order": h.order(),
        "generators": h.generators().iter().map(json::element).collect::<Vec<_>>(),
        "witness": json::label(witness),
    })
}

fn cusps_cmd(form: DiscriminantForm, classes: bool, types: bool, count: bool, guard: &Guard) -> Outcome {
    let all = !(classes || types || count);
    let found = enumerate_types(&form);
    let mut out = json::form(&form);
    if all || count {
        out["count"] = json!(found.len());
    }
    if all || types {
        out["types"] = found.iter().enumerate().map(|(i, (h, w))| type_entry(i, h, w)).collect();
    }
    if all || classes {
        let list: Vec<Value> = cusp_classes(&form, guard)?
            .iter()
            .map(|c| {
                json!({
                    "representative": json::label(&c.representative),
                    "members": c.members.len(),
                    "width": boundary_width(&form, &c.representative),
                    "type": found.iter().position(|(h, _)| *h == c.cusp_type),
                })
            })
            .collect();
        out["classes"] = Value::Array(list);
    }
    Ok(out)
}

fn types_cmd(form: DiscriminantForm, list: bool) -> Outcome {
    let found = enumerate_types(&form);
    let mut out = json!({ "count": found.len() });
    if list {
        out["formula"] = json!(types_count_formula(form.n(), form.nprime())?);
        out["types"] = found.iter().enumerate().map(|(i, (h, w))| type_entry(i, h, w)).collect();
    }
    Ok(out)
}

fn invariants_cmd(form: DiscriminantForm, dim: bool, span: bool, relations: bool, guard: &Guard) -> Outcome {
    let all = !(dim || span || relations);
    let mut out = json::form(&form);
    if all || dim {
        out["dimension"] = json!(invariant_space_dim(&form, guard)?);
    }
    if all || span || relations {
        let s = types_span(&form)?;
        if all || span {
            out["span_dimension"] = json!(s.dimension);
            out["span_formula"] = json!(types_span_dimension_formula(form.n(), form.nprime())?);
            out["types"] = s.types.iter().enumerate().map(|(i, (h, w))| type_entry(i, h, w)).collect();
        }
        if all || relations {
            out["relations"] = s
                .relations
                .iter()
                .map(|rel| {
                    let nonzero: serde_json::Map<String, Value> = rel
                        .iter()
                        .enumerate()
                        .filter(|(_, c)| **c != rat_int(0))
                        .map(|(i, c)| (i.to_string(), json::rational(c)))
                        .collect();
                    Value::Object(nonzero)
                })
                .collect();
        }
    }
    Ok(out)
}

fn zdiv_cmd(args: &SubgroupArgs, guard: &Guard) -> Outcome {
    let form = args.form.form()?;
    let h = parse_subgroup(&form, &args.h)?;
    let classes = cusp_classes(&form, guard)?;
    Ok(json::divisor(&special_divisor(&form, &classes, &h)?))
}

fn is_special_cmd(args: &FileArgs, guard: &Guard) -> Outcome {
    let (d, classes) = read_divisor(args, guard)?;
    Ok(json::certificate(is_special(&d, &classes)?.as_ref()))
}

fn weyl_cmd(args: &SubgroupArgs, label: Option<LabelArgs>, guard: &Guard) -> Outcome {
    let form = args.form.form()?;
    let h = parse_subgroup(&form, &args.h)?;
    let labels = match label {
        Some(l) => vec![l.label()?],
        None => cusp_classes(&form, guard)?.into_iter().map(|c| c.representative).collect(),
    };
    let rows = labels
        .iter()
        .map(|l| {
            let (nz, nzt) = divisors::levels_of_cusp(&form, l)?;
            Ok(json!({
                "class": json::label(l),
                "levels": [nz, nzt],
                "constant": json::rational(&divisors::weyl_component_constant(&form, &h, l)?),
                "b2": json::rational(&divisors::weyl_component_b2(&form, &h, l)?),
            }))
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    Ok(json!({ "rows": rows }))
}

fn eta_cmd(cmd: &EtaCommand) -> Outcome {
    match *cmd {
        EtaCommand::Identity { p, r, terms, lifted } => {
            if lifted {
                let holds = lifted_eta_identity_check(p, r, terms)?;
                return Ok(json!({"p": p, "r": r, "terms": terms, "lifted": true, "holds": holds}));
            }
            let rep = eta_identity_check(p, r, terms)?;
            Ok(json!({
                "p": p,
                "r": r,
                "terms": terms,
                "holds": rep.holds,
                "leading_exponents": [json::rational(&rep.leading_exponents.0), json::rational(&rep.leading_exponents.1)],
                "conductor": rep.constant.conductor(),
                "constant": json::cyclotomic(&rep.constant),
                "expected_constant": json::cyclotomic(&rep.expected_constant),
                "constant_matches": rep.constant == rep.expected_constant,
            }))
        }
        EtaCommand::Psi { form, label, terms, convention } => {
            if terms == 0 {
                return Err(CliError::usage("--terms must be positive"));
            }
            let form = form.form()?;
            let label = label.label()?;
            let (z1, z2) = psi_factors(&form, &label, convention.into());
            let expand = |f: &qeta::EtaFactor| -> Result<Value, CliError> {
                let lead = &f.alpha / rat_int(24);
                let last = &lead + &f.alpha * rat(terms as i64 - 1, 1);
                let s = eta_expansion(&f.alpha, &f.beta, &last)?;
                Ok(json!({
                    "alpha": json::rational(&f.alpha),
                    "beta": json::rational(&f.beta),
                    "series": json::series(&s),
                }))
            };
            Ok(json!({
                "label": json::label(&label),
                "z1": expand(&z1[0])?,
                "z2": expand(&z2[0])?,
            }))
        }
    }
}

fn cross_validate_cmd(args: &SubgroupArgs, convention: Convention, guard: &Guard) -> Outcome {
    let form = args.form.form()?;
    let h = parse_subgroup(&form, &args.h)?;
    let cv = cross_validate_boundary(&form, &h, guard, convention.into())?;
    let rows: Vec<Value> = cv
        .rows
        .iter()
        .map(|r| {
            json!({
                "class": json::label(&r.class),
                "order": json::rational(&r.order),
                "intersection": r.intersection,
                "ratio": json::rational(&r.ratio),
            })
        })
        .collect();
    Ok(json!({"rows": rows, "constant": cv.constant.as_ref().map(json::rational)}))
}

fn sample_cmd(form: DiscriminantForm, perturb: bool, seed: u64, guard: &Guard) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let classes = cusp_classes(&form, guard)?;
    let mut d = BoundaryDivisor::zero(form);
    for (h, _) in enumerate_types(&form) {
        let c = rat(rng.gen_range(-5..=5), rng.gen_range(1..=4));
        d = d.add(&special_divisor(&form, &classes, &h)?.scale(&c))?;
    }
    if perturb {
        let class = &classes[rng.gen_range(0..classes.len())];
        let bump = BoundaryDivisor::from_entries(form, &classes, [(class.representative, rat(rng.gen_range(1..=5), 1))])?;
        d = d.add(&bump)?;
    }
    Ok(json::divisor(&d))
}

fn run(cli: &Cli) -> Outcome {
    let guard = Guard::from_env();
    match &cli.command {
        Command::Cusps { form, classes, types, count } => cusps_cmd(form.form()?, *classes, *types, *count, &guard),
        Command::Types { form, list } => types_cmd(form.form()?, *list),
        Command::Invariants { form, dim, span, relations } => invariants_cmd(form.form()?, *dim, *span, *relations, &guard),
        Command::Relations { p, r, rprime } => {
            let rep = relation_report(*p, *r, *rprime)?;
            Ok(json!({
                "p": p,
                "r": r,
                "rprime": rprime,
                "kernel_dimension": rep.kernel_dimension,
                "literal_in_kernel": rep.literal_in_kernel,
                "distinct_in_kernel": rep.distinct_in_kernel,
            }))
        }
        Command::Zdiv(args) | Command::Divisor(DivisorCommand::ZH(args)) => zdiv_cmd(args, &guard),
        Command::IsSpecial(args) | Command::Divisor(DivisorCommand::IsSpecial(args)) => is_special_cmd(args, &guard),
        Command::Weyl { subgroup, star, a, c } => {
            let label = match (a, c) {
                (Some(a), Some(c)) => Some(LabelArgs { star: star.unwrap_or(1), a: *a, c: *c }),
                _ => None,
            };
            weyl_cmd(subgroup, label, &guard)
        }
        Command::Eta(cmd) => eta_cmd(cmd),
        Command::CrossValidate { subgroup, convention } => cross_validate_cmd(subgroup, *convention, &guard),
        Command::Divisor(DivisorCommand::Sample { form, perturb }) => sample_cmd(form.form()?, *perturb, cli.seed, &guard),
    }
}

fn fail(e: &CliError) -> ExitCode {
    eprintln!("error: {}: {}", e.kind(), e.message().replace('\n', " "));
    ExitCode::from(e.exit_code())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => e.exit(),
        Err(e) => {
            let msg = e.to_string();
            let first = msg.lines().next().unwrap_or("").trim_start_matches("error: ");
            return fail(&CliError::usage(first));
        }
    };
    panic::set_hook(Box::new(|_| {}));
    let outcome = panic::catch_unwind(|| run(&cli)).unwrap_or_else(|payload| {
        let msg = payload
            .downcast_ref::<String>()
            .cloned()
            .or_else(|| payload.downcast_ref::<&str>().map(|s| s.to_string()))
            .unwrap_or_else(|| "panic".to_string());
        Err(CliError::Library(Error::Internal(msg)))
    });
    match outcome {
        Ok(v) => {
            let text = if cli.pretty {
                serde_json::to_string_pretty(&v)
            } else {
                serde_json::to_string(&v)
            };
            println!("{}", text.expect("values serialize"));
            ExitCode::SUCCESS
        }
        Err(e) => fail(&e),
    }
}
