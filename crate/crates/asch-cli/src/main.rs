//! Batch front end for the scheme library: generate, certify, dissect,
//! refine and extract, with bit-exact file output and machine-readable exit
//! codes (0 = all checks pass, 1 = a mathematical check failed, 2 = usage or
//! format error).

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use sha2::{Digest, Sha256};

use asch_core::linalg::format_rat;
use asch_core::*;

#[derive(Parser)]
#[command(
    name = "asch",
    version,
    about = "Exact certification and dissection of symmetric association schemes"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Generate the four-weight trace-code instance for an odd extension
    /// degree: codeword list, scheme table, and the coset spread.
    Gold {
        #[arg(short)]
        m: u32,
        #[arg(short, long, default_value = ".")]
        out: PathBuf,
    },
    /// Certify the scheme axioms of a scheme file and print the valencies.
    Verify { scheme: PathBuf },
    /// Compute the eigenmatrices; emits P.mat and Q.mat.
    Spectra {
        scheme: PathBuf,
        #[arg(short, long, default_value = ".")]
        out: PathBuf,
    },
    /// List all closed relation subsets.
    Imprimitive { scheme: PathBuf },
    /// Quotient by a closed subset of relation indices; emits quotient.asch.
    Quotient {
        scheme: PathBuf,
        /// Comma-separated relation indices of the closed subset (0 is
        /// implied).
        #[arg(long, value_delimiter = ',', required = true)]
        block: Vec<usize>,
        #[arg(short, long, default_value = ".")]
        out: PathBuf,
    },
    /// Recognize a two-fold cover and print its parameters and identities.
    CoverParams { scheme: PathBuf },
    /// Print theta and the clique bound of a recognized cover.
    CliqueBound { scheme: PathBuf },
    /// Refine a cover along a spread partition; emits fission.asch and,
    /// with --report, reconciliation.txt.
    Fission {
        scheme: PathBuf,
        #[arg(long)]
        partition: PathBuf,
        #[arg(long)]
        report: bool,
        #[arg(short, long, default_value = ".")]
        out: PathBuf,
    },
    /// Extract the mutually unbiased weighing family from a fission scheme;
    /// emits one w_<a>_<b>.wm file per clique.
    Muwm {
        scheme: PathBuf,
        #[arg(long)]
        partition: PathBuf,
        #[arg(short, long, default_value = ".")]
        out: PathBuf,
    },
}

/// Failure modes mapped onto the exit-code contract.
enum Failure {
    /// A mathematical check failed; witnesses are in the message. Exit 1.
    Math(String),
    /// Unusable input: missing file, malformed format, unsupported
    /// parameter. Exit 2.
    Usage(String),
}

impl Failure {
    fn math(e: impl std::fmt::Display) -> Self {
        Failure::Math(e.to_string())
    }

    fn usage(e: impl std::fmt::Display) -> Self {
        Failure::Usage(e.to_string())
    }
}

fn main() -> ExitCode {
    if let Ok(v) = std::env::var("ASCH_THREADS") {
        if let Ok(n) = v.parse::<usize>() {
            if n > 0 {
                let _ = rayon::ThreadPoolBuilder::new()
                    .num_threads(n)
                    .build_global();
            }
        }
    }
    let cli = Cli::parse();
    match run(cli.cmd) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Math(msg)) => {
            eprintln!("FAIL: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

/// Written artifacts with their content hashes; identical inputs always
/// produce identical bytes.
struct Manifest {
    artifacts: Vec<(PathBuf, String)>,
}

impl Manifest {
    fn new() -> Self {
        Manifest {
            artifacts: Vec::new(),
        }
    }

    fn write(&mut self, dir: &Path, name: &str, content: &str) -> Result<(), Failure> {
        std::fs::create_dir_all(dir)
            .map_err(|e| Failure::usage(format!("cannot create {}: {e}", dir.display())))?;
        let path = dir.join(name);
        std::fs::write(&path, content)
            .map_err(|e| Failure::usage(format!("cannot write {}: {e}", path.display())))?;
        let digest = Sha256::digest(content.as_bytes());
        let mut hex = String::with_capacity(64);
        for byte in digest {
            let _ = write!(hex, "{byte:02x}");
        }
        self.artifacts.push((path, hex));
        Ok(())
    }

    fn print(&self) {
        for (path, hash) in &self.artifacts {
            println!("WROTE {} sha256={hash}", path.display());
        }
    }
}

fn read_to_string(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path)
        .map_err(|e| Failure::usage(format!("cannot read {}: {e}", path.display())))
}

fn load_scheme(path: &Path) -> Result<RelationPartition, Failure> {
    io::parse_scheme(&read_to_string(path)?)
        .map_err(|e| Failure::usage(format!("{}: {e}", path.display())))
}

fn load_partition(path: &Path) -> Result<(Vec<usize>, usize), Failure> {
    io::parse_partition(&read_to_string(path)?)
        .map_err(|e| Failure::usage(format!("{}: {e}", path.display())))
}

fn certify(rp: &RelationPartition) -> Result<SchemeCertificate, Failure> {
    verify_axioms(rp).map_err(Failure::math)
}

fn ints_line(label: &str, values: &[u64]) -> String {
    let list: Vec<String> = values.iter().map(|v| v.to_string()).collect();
    format!("{label}: {}", list.join(" "))
}

fn bigints_line(label: &str, values: &[num_bigint::BigInt]) -> String {
    let list: Vec<String> = values.iter().map(|v| v.to_string()).collect();
    format!("{label}: {}", list.join(" "))
}

fn run(cmd: Cmd) -> Result<(), Failure> {
    match cmd {
        Cmd::Gold { m, out } => cmd_gold(m, &out),
        Cmd::Verify { scheme } => cmd_verify(&scheme),
        Cmd::Spectra { scheme, out } => cmd_spectra(&scheme, &out),
        Cmd::Imprimitive { scheme } => cmd_imprimitive(&scheme),
        Cmd::Quotient { scheme, block, out } => cmd_quotient(&scheme, &block, &out),
        Cmd::CoverParams { scheme } => cmd_cover_params(&scheme),
        Cmd::CliqueBound { scheme } => cmd_clique_bound(&scheme),
        Cmd::Fission {
            scheme,
            partition,
            report,
            out,
        } => cmd_fission(&scheme, &partition, report, &out),
        Cmd::Muwm {
            scheme,
            partition,
            out,
        } => cmd_muwm(&scheme, &partition, &out),
    }
}

fn cmd_gold(m: u32, out: &Path) -> Result<(), Failure> {
    let code = build_gold_code(m).map_err(|e| match e {
        GoldError::EvenDegree(_) => Failure::Usage("m must be odd".into()),
        GoldError::UnsupportedDegree(_) => {
            Failure::Usage(format!("m={m} outside the supported range 3..=15"))
        }
        other => Failure::Math(other.to_string()),
    })?;
    let rp = code.scheme().map_err(Failure::math)?;
    let (blocks, f) = code.rm_coset_partition();
    let mut manifest = Manifest::new();
    manifest.write(out, "codewords.txt", &io::emit_codewords(&code))?;
    manifest.write(out, "scheme.asch", &io::emit_scheme(&rp))?;
    manifest.write(out, "cosets.part", &io::emit_partition(&blocks, f))?;
    manifest.print();
    println!("n={} d={} f={f}", rp.n(), rp.d());
    Ok(())
}

fn cmd_verify(path: &Path) -> Result<(), Failure> {
    let cert = certify(&load_scheme(path)?)?;
    println!("{}", ints_line("valencies", cert.valencies()));
    println!("OK: {}-class scheme on {} points", cert.d(), cert.n());
    Ok(())
}

fn cmd_spectra(path: &Path, out: &Path) -> Result<(), Failure> {
    let cert = certify(&load_scheme(path)?)?;
    let spec = compute_spectrum(&cert).map_err(Failure::math)?;
    let mut manifest = Manifest::new();
    manifest.write(out, "P.mat", &spec.p.to_text())?;
    manifest.write(out, "Q.mat", &spec.q.to_text())?;
    manifest.print();
    println!("{}", bigints_line("valencies", &spec.valencies));
    println!("{}", bigints_line("multiplicities", &spec.multiplicities));
    let duality = verify_duality(&spec);
    if !duality.is_ok() {
        let mut msg = String::from("duality identities violated:\n");
        for v in &duality.violations {
            let _ = writeln!(msg, "  {v}");
        }
        return Err(Failure::Math(msg));
    }
    println!("duality: ok");
    Ok(())
}

fn cmd_imprimitive(path: &Path) -> Result<(), Failure> {
    let cert = certify(&load_scheme(path)?)?;
    for subset in find_closed_subsets(&cert) {
        let list: Vec<String> = subset.iter().map(|i| i.to_string()).collect();
        println!("closed: {}", list.join(","));
    }
    Ok(())
}

fn cmd_quotient(path: &Path, block: &[usize], out: &Path) -> Result<(), Failure> {
    let cert = certify(&load_scheme(path)?)?;
    let mut subset: Vec<usize> = block.to_vec();
    if !subset.contains(&0) {
        subset.push(0);
    }
    let q = quotient_scheme(&cert, &subset).map_err(Failure::math)?;
    let mut manifest = Manifest::new();
    manifest.write(out, "quotient.asch", &io::emit_scheme(&q.quotient))?;
    manifest.print();
    println!(
        "quotient: {} blocks of size {}, {} classes",
        q.quotient.n(),
        q.block_size,
        q.quotient.d()
    );
    println!("{}", ints_line("valencies", q.cert.valencies()));
    Ok(())
}

fn cmd_cover_params(path: &Path) -> Result<(), Failure> {
    let cert = certify(&load_scheme(path)?)?;
    let profile = recognize_cover(&cert).map_err(Failure::math)?;
    let arr: Vec<String> = profile.arrangement.iter().map(|i| i.to_string()).collect();
    println!("arrangement: {}", arr.join(" "));
    println!(
        "quotient: m={} r={} s={} n={}",
        format_rat(&profile.m),
        format_rat(&profile.r),
        format_rat(&profile.s),
        profile.n_quotient
    );
    println!(
        "cover: m3={} m4={} alpha3={} alpha4={} k={}",
        profile.m3,
        profile.m4,
        format_rat(&profile.alpha3),
        format_rat(&profile.alpha4),
        profile.k
    );
    let mut ok = true;
    for check in profile.identity_checks() {
        println!("{check}");
        ok &= check.ok;
    }
    let template = profile.q_template_diff();
    println!(
        "Q template: {}",
        if template.is_empty() {
            "exact".into()
        } else {
            format!("{} mismatching cells", template.len())
        }
    );
    let embed = profile.quotient_embedding_diff();
    println!(
        "quotient embedding: {}",
        if embed.is_empty() { "exact" } else { "MISMATCH" }
    );
    let antipodal = antipodal_action(&profile);
    println!(
        "antipodal action: {}",
        if antipodal.is_ok() { "ok" } else { "VIOLATED" }
    );
    if ok && template.is_empty() && embed.is_empty() && antipodal.is_ok() {
        Ok(())
    } else {
        Err(Failure::Math("cover identity checks failed".into()))
    }
}

fn cmd_clique_bound(path: &Path) -> Result<(), Failure> {
    let cert = certify(&load_scheme(path)?)?;
    let profile = recognize_cover(&cert).map_err(Failure::math)?;
    let (theta, bound) = delsarte_bound(&profile.spectrum).map_err(Failure::math)?;
    println!("theta: {}", format_rat(&theta));
    println!("bound: {}", format_rat(&bound));
    Ok(())
}

fn cmd_fission(
    scheme: &Path,
    partition: &Path,
    report: bool,
    out: &Path,
) -> Result<(), Failure> {
    let cert = certify(&load_scheme(scheme)?)?;
    let profile = recognize_cover(&cert).map_err(Failure::math)?;
    let (blocks, _f) = load_partition(partition)?;
    let spread = validate_spread(&profile, &blocks).map_err(Failure::math)?;
    println!(
        "spread: {} blocks of size {} (theta {}, bound {})",
        spread.f,
        spread.block_size(),
        format_rat(&spread.theta),
        format_rat(&spread.bound)
    );
    let fs = fission(&profile, &spread).map_err(Failure::math)?;
    let mut manifest = Manifest::new();
    manifest.write(out, "fission.asch", &io::emit_scheme(&fs.refined))?;
    println!("{}", ints_line("valencies", fs.cert.valencies()));
    println!(
        "{}",
        bigints_line("multiplicities", &fs.spectrum.multiplicities)
    );
    if report {
        let reconciliation = reconcile_fission_formulas(&fs, &profile);
        let text = reconciliation.to_string();
        manifest.write(out, "reconciliation.txt", &text)?;
        print!("{text}");
    }
    manifest.print();
    Ok(())
}

fn cmd_muwm(scheme: &Path, partition: &Path, out: &Path) -> Result<(), Failure> {
    let refined = load_scheme(scheme)?;
    if refined.d() != 5 {
        return Err(Failure::usage(format!(
            "expected a 5-class fission scheme, found {} classes",
            refined.d()
        )));
    }
    let (blocks, _f) = load_partition(partition)?;
    // Fuse the split relation back together, re-recognize the cover, and
    // re-derive the fission; the input must match the re-derivation.
    let fused = RelationPartition::from_fn(refined.n(), 4, |x, y| {
        let r = refined.rel(x, y);
        if r == 5 {
            2
        } else {
            r
        }
    });
    let cover_cert = certify(&fused)?;
    let profile = recognize_cover(&cover_cert).map_err(Failure::math)?;
    let spread = validate_spread(&profile, &blocks).map_err(Failure::math)?;
    let fs = fission(&profile, &spread).map_err(Failure::math)?;
    if fs.refined != refined {
        return Err(Failure::Math(
            "fission scheme does not match the refinement of its own fused cover \
             along the given partition"
                .into(),
        ));
    }

    let bound = muwm_bound(&fs, &profile);
    print!("{bound}");
    let eigenindex = [3usize, 4]
        .into_iter()
        .find(|&e| {
            num_bigint::BigInt::from(2) * &fs.spectrum.multiplicities[e]
                == num_bigint::BigInt::from(spread.block_size())
        })
        .ok_or_else(|| {
            Failure::Math(
                "no antipodal eigenspace has twice its multiplicity equal to the \
                 clique size; no cross-polytope decomposition"
                    .into(),
            )
        })?;
    let gram = gram_blocks(&fs, eigenindex, &spread).map_err(Failure::math)?;
    let fam = extract_weighing_family(&gram).map_err(Failure::math)?;
    let (stated_size, stated_weight) = muwm::stated_parameters(&profile, &fam.alpha);
    println!(
        "family: f={} matrices of size {} weight {} (eigenspace {}, alpha {})",
        fam.f,
        fam.dim,
        fam.weight,
        eigenindex,
        format_rat(&fam.alpha)
    );
    if let (Some(size), Some(weight)) = (stated_size, stated_weight) {
        println!(
            "stated closed forms: size -m/(2s) = {}, weight 1/alpha = {}",
            format_rat(&size),
            format_rat(&weight)
        );
    }
    let mut manifest = Manifest::new();
    for a in 0..fam.f {
        let reference = if a == 0 { 1 } else { 0 };
        let name = format!("w_{a:02}_{reference:02}.wm");
        manifest.write(
            out,
            &name,
            &io::emit_weighing(a, reference, fam.weight, fam.block(a, reference)),
        )?;
    }
    let cert = verify_unbiased(&fam).map_err(Failure::math)?;
    manifest.print();
    println!("{cert}");
    Ok(())
}
