//! Command-line front end and the content-addressed result store.

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::corpus;
use crate::error::Error;
use crate::glk::{kv1_approx, monotone_history, Kv1Options};
use crate::homotopy::{homotopy_classes, search_elementary, Search};
use crate::k0::{k0_presentation, K0Diagram};
use crate::poly::Var;
use crate::ring::{enumerate_homs, Ring, RingHom};
use crate::simplex::simplicial_suite;
use crate::triangle::{
    octahedron, puppe, rotate, rotated_composite, rotation_homotopy, standard_composites, standard_triangle, Diagram,
    Factorization, FibrationFamily, FinitePuppe,
};
use crate::vring::VirtualRing;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");
/// Version of the record and payload schemas in `docs/schemas.md`.
pub const SCHEMA_VERSION: u32 = 1;

#[derive(Parser, Debug)]
#[command(name = "hotring", version, about = "Homotopy theory of finite associative rings")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub config: Config,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct Config {
    /// store directory; HOTRING_HOME takes precedence
    #[arg(long, global = true)]
    #[serde(skip)]
    pub out: Option<PathBuf>,
    /// print the whole record instead of the payload
    #[arg(long, global = true)]
    #[serde(skip)]
    pub json: bool,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// cap on enumerated homs and polynomial candidates
    #[arg(long, global = true, default_value_t = 1 << 20)]
    pub budget: u128,
    #[arg(long, global = true, default_value_t = 200)]
    pub probes: usize,
    #[arg(long, global = true, default_value_t = 4)]
    pub chain_cap: usize,
    #[arg(long, global = true, default_value_t = 4)]
    pub depth_cap: usize,
}

#[derive(Subcommand, Debug, Clone, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    /// Validate a ring and report its basic invariants
    CheckRing {
        path: Option<String>,
        #[arg(long)]
        ring: Option<String>,
    },
    /// Enumerate ring homomorphisms
    Homs {
        #[arg(long)]
        source: String,
        #[arg(long)]
        target: String,
    },
    /// Search for an elementary homotopy (default: from 0 to the identity)
    Homotopy {
        #[arg(long)]
        source: String,
        #[arg(long)]
        target: String,
        #[arg(long, default_value_t = 1)]
        degree: u32,
        #[arg(long)]
        f0: Option<String>,
        #[arg(long)]
        f1: Option<String>,
    },
    /// Homotopy classes of homs visible at a degree bound
    Classes {
        #[arg(long)]
        source: String,
        #[arg(long)]
        target: String,
        #[arg(long, default_value_t = 1)]
        degree: u32,
    },
    /// Level-(n, d) approximation of KV1
    Kv1 {
        #[arg(long)]
        ring: String,
        #[arg(long, default_value_t = 2)]
        size: usize,
        #[arg(long, default_value_t = 1)]
        degree: u32,
    },
    /// Factor homs through a path-space fibration, and check the axioms
    Factorize {
        #[arg(long)]
        source: Option<String>,
        #[arg(long)]
        target: Option<String>,
        #[arg(long)]
        hom: Vec<String>,
    },
    /// Mapping-path stages and finite exactness
    Puppe {
        #[arg(long)]
        hom: String,
        #[arg(long, default_value_t = 2)]
        length: usize,
        /// truncation level of the finite stages
        #[arg(long, default_value_t = 2)]
        level: usize,
        /// test ring X for the sets [X, -]
        #[arg(long)]
        probe_ring: Option<String>,
        #[arg(long, default_value_t = 1)]
        degree: u32,
    },
    /// Standard left triangle, its rotation and the rotation homotopy
    Triangle {
        #[arg(long)]
        hom: String,
    },
    /// Octahedral diagram of two surjections
    Octahedron {
        #[arg(long)]
        hom: Vec<String>,
        #[arg(long, default_value_t = 2)]
        level: usize,
    },
    /// Presentation of K0 of a diagram
    K0 {
        #[arg(long)]
        diagram: String,
    },
    /// Simplicial identities and vertex-split maps on R[Δ^n]
    SimplicialCheck {
        #[arg(long)]
        ring: String,
        #[arg(long, default_value_t = 4)]
        size: usize,
    },
    /// List (and optionally export) the bundled rings
    Corpus {
        #[arg(long)]
        export: Option<PathBuf>,
    },
}

/// A stored run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResultRecord {
    pub command: String,
    /// sha256 of every input
    pub inputs: Vec<String>,
    pub parameters: Value,
    pub payload: Value,
    pub exit_code: i32,
    pub timestamp: u64,
    pub version: String,
    pub schema: u32,
}

/// Exit status and stdout text of one invocation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
    pub cache_hit: bool,
}

enum Failure {
    Input(String),
    Lib(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

impl Failure {
    fn code(&self) -> i32 {
        match self {
            Failure::Input(_) => 1,
            Failure::Lib(e) => exit_code(e),
        }
    }

    fn message(&self) -> String {
        match self {
            Failure::Input(m) => m.clone(),
            Failure::Lib(e) => e.to_string(),
        }
    }
}

/// 2 for failed verification, 3 for exhausted budgets, 1 for bad input.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::BudgetExceeded { .. } | Error::DepthExceeded { .. } => 3,
        Error::NotAssociative { .. }
        | Error::IllDefined { .. }
        | Error::BadUnit(_)
        | Error::NotHom(_)
        | Error::MembershipViolation(_)
        | Error::VerificationFailure(_) => 2,
        _ => 1,
    }
}

/// Where records live: `HOTRING_HOME`, else `--out`, else `./.hotring`.
pub fn store_dir(config: &Config) -> PathBuf {
    if let Some(home) = std::env::var_os("HOTRING_HOME") {
        return PathBuf::from(home);
    }
    config.out.clone().unwrap_or_else(|| PathBuf::from(".hotring"))
}

fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

/// Writes through a temporary file and a rename.
fn write_atomic(path: &Path, bytes: &[u8]) -> std::io::Result<()> {
    let dir = path.parent().unwrap_or(Path::new("."));
    fs::create_dir_all(dir)?;
    let tmp = dir.join(format!(".{}.{}.tmp", path.file_name().and_then(|s| s.to_str()).unwrap_or("record"), std::process::id()));
    fs::write(&tmp, bytes)?;
    fs::rename(&tmp, path)
}

/// Loads inputs, remembering their hashes.
struct Loader {
    hashes: Vec<String>,
    rings: Vec<Ring>,
}

impl Loader {
    fn new() -> Self {
        Loader { hashes: Vec::new(), rings: Vec::new() }
    }

    fn read(&mut self, path: &str) -> Result<String, Failure> {
        let text = fs::read_to_string(path).map_err(|e| Failure::Input(format!("{path}: {e}")))?;
        self.hashes.push(sha256_hex(text.as_bytes()));
        Ok(text)
    }

    /// A ring file, or a corpus ring by stem or label.
    fn ring(&mut self, name: &str) -> Result<Ring, Failure> {
        let r = if Path::new(name).is_file() {
            let text = self.read(name)?;
            let spec = serde_json::from_str(&text).map_err(|e| Failure::Input(format!("{name}: {e}")))?;
            std::sync::Arc::new(crate::ring::FiniteRing::new(spec)?)
        } else if let Some((stem, r)) = corpus::lookup(name) {
            self.hashes.push(sha256_hex(format!("corpus:{stem}").as_bytes()));
            r
        } else {
            return Err(Failure::Input(format!("unknown ring label {name}")));
        };
        self.rings.push(r.clone());
        Ok(r)
    }

    /// A hom file whose endpoints are labels of loaded or corpus rings.
    fn hom(&mut self, path: &str) -> Result<RingHom, Failure> {
        let text = self.read(path)?;
        let mut known = self.rings.clone();
        known.extend(corpus::rings().into_iter().map(|(_, r)| r));
        corpus::parse_hom(&text, &known).map_err(|e| match e {
            Error::Parse(m) => Failure::Input(format!("{path}: {m}")),
            other => Failure::Lib(other),
        })
    }
}

/// Parses arguments and runs one command against the store.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            return Outcome { code, stdout: String::new(), stderr: e.to_string(), cache_hit: false };
        }
    };
    run_cli(&cli)
}

pub fn run_cli(cli: &Cli) -> Outcome {
    let cfg = &cli.config;
    if cfg.budget == 0 || cfg.probes == 0 || cfg.chain_cap == 0 || cfg.depth_cap == 0 {
        return Outcome { code: 1, stdout: String::new(), stderr: "budgets must be positive".into(), cache_hit: false };
    }
    let command_name = serde_json::to_value(&cli.command)
        .ok()
        .and_then(|v| match v {
            Value::String(s) => Some(s),
            Value::Object(m) => m.keys().next().cloned(),
            _ => None,
        })
        .unwrap_or_default();
    let parameters = json!({ "command": &cli.command, "config": cfg });
    let mut loader = Loader::new();
    let result = execute(&cli.command, cfg, &mut loader);
    let (payload, code) = match result {
        Ok((p, ok)) => (p, if ok { 0 } else { 2 }),
        Err(f) => {
            let code = f.code();
            return Outcome {
                code,
                stdout: serde_json::to_string_pretty(&json!({ "error": f.message(), "exit_code": code })).unwrap(),
                stderr: f.message(),
                cache_hit: false,
            };
        }
    };
    let key_src = json!({ "parameters": &parameters, "inputs": &loader.hashes, "version": VERSION, "schema": SCHEMA_VERSION });
    let key = sha256_hex(key_src.to_string().as_bytes());
    let path = store_dir(cfg).join(format!("{key}.json"));
    let mut cache_hit = false;
    let record = match fs::read_to_string(&path).ok().and_then(|t| serde_json::from_str::<ResultRecord>(&t).ok()) {
        Some(old) => {
            cache_hit = true;
            old
        }
        None => {
            let rec = ResultRecord {
                command: command_name,
                inputs: loader.hashes.clone(),
                parameters,
                payload,
                exit_code: code,
                timestamp: std::time::SystemTime::now().duration_since(std::time::UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0),
                version: VERSION.into(),
                schema: SCHEMA_VERSION,
            };
            if let Err(e) = write_atomic(&path, serde_json::to_string_pretty(&rec).unwrap().as_bytes()) {
                return Outcome { code: 1, stdout: String::new(), stderr: format!("cannot write {}: {e}", path.display()), cache_hit };
            }
            rec
        }
    };
    let stdout = if cfg.json {
        serde_json::to_string(&record).unwrap()
    } else {
        serde_json::to_string_pretty(&record.payload).unwrap()
    };
    let stderr = format!("{} {}", if cache_hit { "cache hit" } else { "stored" }, path.display());
    Outcome { code: record.exit_code, stdout, stderr, cache_hit }
}

/// Runs a command; the flag says whether every verdict was positive.
fn execute(cmd: &Command, cfg: &Config, ld: &mut Loader) -> Result<(Value, bool), Failure> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let x = Var::named("x");
    match cmd {
        Command::CheckRing { path, ring } => {
            let name = path.as_ref().or(ring.as_ref()).ok_or_else(|| Failure::Input("no ring given".into()))?;
            let r = ld.ring(name)?;
            Ok((
                json!({
                    "label": r.label(),
                    "orders": r.orders(),
                    "order": r.order().to_string(),
                    "rank": r.rank(),
                    "unital": r.unit().is_some(),
                    "commutative": r.is_commutative(),
                    "nilpotency_class": r.nilpotency_class(),
                    "valid": true,
                }),
                true,
            ))
        }
        Command::Homs { source, target } => {
            let (r, s) = (ld.ring(source)?, ld.ring(target)?);
            let homs = enumerate_homs(&r, &s, cfg.budget)?;
            let images: Vec<_> = homs.iter().map(|h| h.to_spec().images).collect();
            Ok((json!({ "source": r.label(), "target": s.label(), "count": homs.len(), "homs": images }), true))
        }
        Command::Homotopy { source, target, degree, f0, f1 } => {
            let (r, s) = (ld.ring(source)?, ld.ring(target)?);
            let f0 = match f0 {
                Some(p) => ld.hom(p)?,
                None => RingHom::zero(r.clone(), s.clone()),
            };
            let f1 = match f1 {
                Some(p) => ld.hom(p)?,
                None if r == s => RingHom::identity(r.clone()),
                None => return Err(Failure::Input("--f1 is required when source and target differ".into())),
            };
            match search_elementary(&f0, &f1, *degree, cfg.budget)? {
                Search::Found(c) => {
                    c.verify()?;
                    Ok((json!({ "degree": degree, "found": true, "certificate": c.to_json() }), true))
                }
                Search::NotFoundAtBound { degree, searched } => {
                    Ok((json!({ "degree": degree, "found": false, "searched": searched.to_string() }), true))
                }
            }
        }
        Command::Classes { source, target, degree } => {
            let (r, s) = (ld.ring(source)?, ld.ring(target)?);
            let cl = homotopy_classes(&r, &s, *degree, cfg.budget)?;
            cl.verify()?;
            Ok((
                json!({
                    "degree": degree,
                    "homs": cl.homs.iter().map(|h| h.to_spec().images).collect::<Vec<_>>(),
                    "class_count": cl.class_count(),
                    "classes": cl.partition.classes,
                    "certificates": cl.edges.len(),
                    "merges_verified": cl.merges.len(),
                }),
                true,
            ))
        }
        Command::Kv1 { ring, size, degree } => {
            let a = ld.ring(ring)?;
            let opts = Kv1Options { budget: cfg.budget, ..Kv1Options::default() };
            let p = kv1_approx(&a, *size, *degree, &opts)?;
            let history = monotone_history(&a, *size, *degree, &opts)?;
            Ok((
                json!({
                    "level": format!("level-({size},{degree}) approximation"),
                    "classes": p.order,
                    "order": p.order,
                    "invariant_factors": p.invariant_factors,
                    "monotone_history": history,
                    "presentation": p,
                }),
                true,
            ))
        }
        Command::Factorize { source, target, hom } => {
            let homs: Vec<RingHom> = if hom.is_empty() {
                let (s, t) = match (source, target) {
                    (Some(s), Some(t)) => (ld.ring(s)?, ld.ring(t)?),
                    _ => return Err(Failure::Input("give --hom or both --source and --target".into())),
                };
                enumerate_homs(&s, &t, cfg.budget)?
            } else {
                hom.iter().map(|p| ld.hom(p)).collect::<Result<_, _>>()?
            };
            let mut failures = Vec::new();
            for (i, u) in homs.iter().enumerate() {
                if let Err(e) = Factorization::new(u, x).verify(&mut rng, cfg.probes) {
                    failures.push(json!({ "hom": i, "error": e.to_string() }));
                }
            }
            let mut objects: Vec<Ring> = Vec::new();
            for u in &homs {
                for r in [u.source(), u.target()] {
                    if !objects.contains(r) {
                        objects.push(r.clone());
                    }
                }
            }
            let fam = FibrationFamily::surjections(Diagram { objects, maps: homs.clone() });
            let rep = fam.check_axioms(&mut rng, cfg.probes.min(50))?;
            let violations: Vec<_> = rep.violations.iter().map(|v| json!({ "axiom": v.axiom, "detail": v.detail })).collect();
            let ok = failures.is_empty() && violations.is_empty();
            Ok((
                json!({
                    "checked": homs.len(),
                    "failures": failures,
                    "axioms": { "checked": rep.checked, "violations": violations },
                }),
                ok,
            ))
        }
        Command::Puppe { hom, length, level, probe_ring, degree } => {
            let g = ld.hom(hom)?;
            let seq = puppe(&g, *length, cfg.depth_cap)?;
            seq.verify(&mut rng, cfg.probes)?;
            let fin = FinitePuppe::new(&g, *level)?;
            fin.check_composites()?;
            let xr = match probe_ring {
                Some(n) => ld.ring(n)?,
                None => g.source().clone(),
            };
            let ex = fin.exactness(&xr, *degree, cfg.budget)?;
            Ok((
                json!({
                    "stages": seq.stages.iter().map(|s| s.ring.describe()).collect::<Vec<_>>(),
                    "intensional_verified": true,
                    "finite_level": level,
                    "finite_orders": fin.stages.iter().map(|s| s.ring().order().to_string()).collect::<Vec<_>>(),
                    "composites_vanish": true,
                    "class_counts": ex.class_counts,
                    "exact_at_b": ex.at_b,
                    "exact_at_pg": ex.at_pg,
                }),
                ex.at_b && ex.at_pg,
            ))
        }
        Command::Triangle { hom } => {
            let g = ld.hom(hom)?;
            let y = Var::named("y");
            let t = standard_triangle(&g, x);
            t.check_maps(&mut rng, cfg.probes)?;
            standard_composites(&g, &mut rng, cfg.probes)?;
            let loops = VirtualRing::loops(g.source(), x).probes(&mut rng, cfg.probes, 3)?;
            rotation_homotopy(&g, x, y).verify_on(&loops)?;
            rotated_composite(&g, x, y).verify_on(&loops)?;
            let r1 = rotate(&t);
            r1.check_maps(&mut rng, cfg.probes)?;
            let r2 = rotate(&r1);
            r2.check_maps(&mut rng, cfg.probes)?;
            Ok((
                json!({
                    "objects": t.objects.iter().map(|o| o.describe()).collect::<Vec<_>>(),
                    "rotated": r1.objects.iter().map(|o| o.describe()).collect::<Vec<_>>(),
                    "maps_verified": true,
                    "composites": ["literal", "null-homotopic"],
                    "rotation_homotopy_verified": true,
                    "probes": cfg.probes,
                }),
                true,
            ))
        }
        Command::Octahedron { hom, level } => {
            if hom.len() != 2 {
                return Err(Failure::Input("octahedron takes exactly two --hom files (h, then k)".into()));
            }
            let (h, k) = (ld.hom(&hom[0])?, ld.hom(&hom[1])?);
            let o = octahedron(&h, &k)?;
            let a = o.verify_intensional(&mut rng, cfg.probes)?;
            let b = o.verify_finite(*level)?;
            Ok((
                json!({
                    "orders": a.orders.map(|n| n.to_string()),
                    "exact_row": a.exact_row,
                    "probe_checks": a.checked,
                    "finite_checks": b.checked,
                    "finite_level": level,
                }),
                a.exact_row,
            ))
        }
        Command::K0 { diagram } => {
            let text = ld.read(diagram)?;
            let d: K0Diagram = serde_json::from_str(&text).map_err(|e| Failure::Input(format!("{diagram}: {e}")))?;
            let p = k0_presentation(&d)?;
            Ok((serde_json::to_value(&p).unwrap(), true))
        }
        Command::SimplicialCheck { ring, size } => {
            let r = ld.ring(ring)?;
            let rep = simplicial_suite(&r, *size, (*size).min(3), cfg.probes, &mut rng)?;
            Ok((serde_json::to_value(&rep).unwrap(), true))
        }
        Command::Corpus { export } => {
            let mut list = Vec::new();
            for (name, json_text) in corpus::RINGS {
                let r = corpus::parse_ring(json_text)?;
                ld.hashes.push(sha256_hex(json_text.as_bytes()));
                if let Some(dir) = export {
                    write_atomic(&dir.join(format!("{name}.json")), json_text.as_bytes())
                        .map_err(|e| Failure::Input(format!("{}: {e}", dir.display())))?;
                }
                list.push(json!({ "name": name, "label": r.label(), "order": r.order().to_string(), "valid": true }));
            }
            Ok((json!({ "rings": list }), true))
        }
    }
}
