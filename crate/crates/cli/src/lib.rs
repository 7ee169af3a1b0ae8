//! Batch runner behind the `phan` binary.
//!
//! Every subcommand builds its objects, runs a fixed list of checks and
//! collects them into a [`Report`]. Reports contain no timings or paths, so
//! the same configuration always serializes to the same bytes.

use phan_core::amalgam::{build_slim_amalgam, certify_completion, completion_index, Verdict, DEFAULT_MAX_COSETS};
use phan_core::cover::{build_cover, verify_cover};
use phan_core::geometry::{build_gamma, build_pi, check_phi, hyperplane_check, standard_pi_pair, to_dot, Geometry, PiRadicalCheck};
use phan_core::groups::{map_flag_traced, random_flag, sp_group, sp_order, verify_structure_suite, DEFAULT_GROUP_CAP};
use phan_core::homotopy::{
    abelianized_invariants, decide_group_order, pi1_point_line_presentation, pi1_presentation, simplify, GroupOrder, DEFAULT_COSET_CAP,
};
use phan_core::{Error, Subspace, SymplecticSpace};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};
use std::collections::BTreeMap;
use std::fmt;
use std::path::PathBuf;

pub const SUPPORTED_PRIMES: [u8; 4] = [2, 3, 5, 7];
pub const MAX_DIM: usize = 8;
pub const DEFAULT_MAX_TRIANGLES: usize = 2_000_000;
pub const DEFAULT_SEED: u64 = 0;
/// Random same-type flag pairs tried per run of the flag-transitivity check.
pub const FLAG_SAMPLES: usize = 1000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    Gamma,
    Pi,
    Cover,
    Pi1,
    Groups,
    Amalgam,
    All,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Gamma => "gamma",
            Command::Pi => "pi",
            Command::Cover => "cover",
            Command::Pi1 => "pi1",
            Command::Groups => "groups",
            Command::Amalgam => "amalgam",
            Command::All => "all",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunConfig {
    pub command: Command,
    pub n: usize,
    pub p: u8,
    pub max_cosets: usize,
    pub max_group: usize,
    pub max_triangles: usize,
    /// Global memory ceiling in MiB; tightens the other caps.
    pub cap_mb: Option<u64>,
    pub seed: u64,
    pub out: Option<PathBuf>,
    pub dot: bool,
}

impl RunConfig {
    pub fn new(command: Command, n: usize, p: u8) -> Self {
        RunConfig {
            command,
            n,
            p,
            max_cosets: DEFAULT_COSET_CAP,
            max_group: DEFAULT_GROUP_CAP,
            max_triangles: DEFAULT_MAX_TRIANGLES,
            cap_mb: None,
            seed: DEFAULT_SEED,
            out: None,
            dot: false,
        }
    }

    pub fn validate(&self) -> Result<(), RunError> {
        if !SUPPORTED_PRIMES.contains(&self.p) {
            return Err(RunError::Unsupported(format!("p = {} is not one of 2, 3, 5, 7", self.p)));
        }
        if !(2..=MAX_DIM).contains(&self.n) {
            return Err(RunError::Unsupported(format!("n = {} outside 2..={MAX_DIM}", self.n)));
        }
        if self.max_cosets == 0 || self.max_group == 0 || self.max_triangles == 0 || self.cap_mb == Some(0) {
            return Err(RunError::Config("caps must be positive".into()));
        }
        Ok(())
    }

    /// Caps after applying the memory ceiling. Coset tables are costed at 16
    /// columns of 4 bytes, group elements at `n^2` bytes plus hashing overhead.
    pub fn effective_caps(&self) -> Caps {
        let mut caps = Caps { max_cosets: self.max_cosets, max_group: self.max_group, max_triangles: self.max_triangles };
        if let Some(mb) = self.cap_mb {
            let bytes = mb as usize * (1 << 20);
            caps.max_cosets = caps.max_cosets.min(bytes / 64).max(1);
            caps.max_group = caps.max_group.min(bytes / (self.n * self.n + 64)).max(1);
            caps.max_triangles = caps.max_triangles.min(bytes / 64).max(1);
        }
        caps
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Caps {
    pub max_cosets: usize,
    pub max_group: usize,
    pub max_triangles: usize,
}

#[derive(Debug)]
pub enum RunError {
    Unsupported(String),
    Config(String),
    Io(std::io::Error),
}

impl fmt::Display for RunError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RunError::Unsupported(s) => write!(f, "unsupported: {s}"),
            RunError::Config(s) => write!(f, "invalid configuration: {s}"),
            RunError::Io(e) => write!(f, "i/o error: {e}"),
        }
    }
}

impl std::error::Error for RunError {}

impl From<std::io::Error> for RunError {
    fn from(e: std::io::Error) -> Self {
        RunError::Io(e)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    /// Undecided within the caps.
    Unknown,
    /// Computed value with no claim attached.
    Info,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Exhaustive,
    Sampled,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub id: String,
    pub instance: String,
    pub status: Status,
    pub mode: Mode,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Section {
    pub name: String,
    pub data: Value,
    pub checks: Vec<Check>,
}

impl Section {
    fn new(name: &str) -> Self {
        Section { name: name.into(), data: json!({}), checks: Vec::new() }
    }

    fn check(&mut self, id: &str, instance: impl Into<String>, holds: bool, detail: impl Into<String>) {
        self.push(id, instance, if holds { Status::Pass } else { Status::Fail }, Mode::Exhaustive, detail);
    }

    fn push(&mut self, id: &str, instance: impl Into<String>, status: Status, mode: Mode, detail: impl Into<String>) {
        self.checks.push(Check { id: id.into(), instance: instance.into(), status, mode, detail: detail.into() });
    }

    fn set(&mut self, key: &str, v: impl Serialize) {
        self.data[key] = serde_json::to_value(v).expect("report data serializes");
    }

    /// Cap overflows become `unknown`; anything else is a failed check.
    fn error(&mut self, id: &str, instance: impl Into<String>, e: &Error) {
        let status = if matches!(e, Error::CapExceeded { .. }) { Status::Unknown } else { Status::Fail };
        let detail = if status == Status::Unknown { format!("inconclusive: {e}") } else { e.to_string() };
        self.push(id, instance, status, Mode::Exhaustive, detail);
    }

    pub fn get(&self, id: &str, instance: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.id == id && c.instance == instance)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConfigEcho {
    pub command: Command,
    pub n: usize,
    pub p: u8,
    pub seed: u64,
    pub max_cosets: usize,
    pub max_group: usize,
    pub max_triangles: usize,
    pub cap_mb: Option<u64>,
    pub effective_caps: Caps,
    pub dot: bool,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Summary {
    pub pass: usize,
    pub fail: usize,
    pub unknown: usize,
    pub info: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Report {
    pub tool: String,
    pub version: String,
    pub config: ConfigEcho,
    pub sections: Vec<Section>,
    /// Sections of `all` that do not apply to this `(n, p)`, with the reason.
    pub skipped: BTreeMap<String, String>,
    pub summary: Summary,
    pub exit_code: i32,
}

impl Report {
    pub fn section(&self, name: &str) -> Option<&Section> {
        self.sections.iter().find(|s| s.name == name)
    }

    pub fn checks(&self) -> impl Iterator<Item = &Check> {
        self.sections.iter().flat_map(|s| s.checks.iter())
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}

/// Outcome of [`run`]: the report, its exit code and the files written.
#[derive(Clone, Debug)]
pub struct RunOutput {
    pub report: Report,
    pub exit_code: i32,
    pub files: Vec<PathBuf>,
}

struct Ctx<'a> {
    cfg: &'a RunConfig,
    caps: Caps,
    sp: SymplecticSpace,
    gamma: Option<Geometry>,
    pi: Option<Geometry>,
    dots: Vec<(String, String)>,
}

impl Ctx<'_> {
    fn tag(&self) -> String {
        format!("n{}-p{}", self.cfg.n, self.cfg.p)
    }

    fn gamma(&mut self) -> &Geometry {
        if self.gamma.is_none() {
            self.gamma = Some(build_gamma(&self.sp).expect("standard space builds"));
        }
        self.gamma.as_ref().unwrap()
    }

    fn pi(&mut self) -> &Geometry {
        if self.pi.is_none() {
            let (p, h) = standard_pi_pair(&self.sp);
            self.pi = Some(build_pi(&self.sp, &p, &h).expect("standard pair builds"));
        }
        self.pi.as_ref().unwrap()
    }
}

fn requirement(cmd: Command, n: usize, p: u8) -> Result<(), String> {
    match cmd {
        Command::Pi if n < 3 => Err("Pi(p, H) needs n >= 3".into()),
        Command::Pi1 if n < 3 => Err("fundamental groups need rank at least 2, so n >= 3".into()),
        Command::Cover if (n, p) != (6, 2) => Err("the double cover is defined for n = 6, p = 2".into()),
        Command::Groups if n < 4 || n % 2 == 1 => Err("the structure suite needs even n >= 4".into()),
        Command::Amalgam if n < 4 || n % 2 == 1 || p == 2 => Err("the slim amalgam needs even n >= 4 and odd p".into()),
        _ => Ok(()),
    }
}

/// Build the report for `cfg` without touching the file system.
pub fn build_report(cfg: &RunConfig) -> Result<Report, RunError> {
    Ok(execute(cfg)?.0)
}

fn execute(cfg: &RunConfig) -> Result<(Report, Vec<(String, String)>), RunError> {
    cfg.validate()?;
    let caps = cfg.effective_caps();
    let sp = SymplecticSpace::standard(cfg.n, cfg.p).map_err(|e| RunError::Unsupported(e.to_string()))?;
    let mut ctx = Ctx { cfg, caps, sp, gamma: None, pi: None, dots: Vec::new() };
    let mut sections = Vec::new();
    let mut skipped = BTreeMap::new();
    let commands = match cfg.command {
        Command::All => vec![Command::Gamma, Command::Pi, Command::Pi1, Command::Groups, Command::Amalgam, Command::Cover],
        c => vec![c],
    };
    for c in commands {
        if let Err(why) = requirement(c, cfg.n, cfg.p) {
            if cfg.command == Command::All {
                skipped.insert(c.name().to_string(), why);
                continue;
            }
            return Err(RunError::Unsupported(why));
        }
        sections.push(match c {
            Command::Gamma => gamma_section(&mut ctx),
            Command::Pi => pi_section(&mut ctx),
            Command::Pi1 => pi1_section(&mut ctx),
            Command::Groups => groups_section(&mut ctx),
            Command::Amalgam => amalgam_section(&mut ctx),
            Command::Cover => cover_section(&mut ctx),
            Command::All => unreachable!(),
        });
    }
    let mut summary = Summary::default();
    for c in sections.iter().flat_map(|s| s.checks.iter()) {
        match c.status {
            Status::Pass => summary.pass += 1,
            Status::Fail => summary.fail += 1,
            Status::Unknown => summary.unknown += 1,
            Status::Info => summary.info += 1,
        }
    }
    let exit_code = i32::from(summary.fail > 0);
    let report = Report {
        tool: "phan".into(),
        version: env!("CARGO_PKG_VERSION").into(),
        config: ConfigEcho {
            command: cfg.command,
            n: cfg.n,
            p: cfg.p,
            seed: cfg.seed,
            max_cosets: cfg.max_cosets,
            max_group: cfg.max_group,
            max_triangles: cfg.max_triangles,
            cap_mb: cfg.cap_mb,
            effective_caps: caps,
            dot: cfg.dot,
        },
        sections,
        skipped,
        summary,
        exit_code,
    };
    Ok((report, ctx.dots))
}

/// Run the subcommand, write the report (and DOT files with `dot`) under
/// `out` when given, and return the exit code: 0 when every check passes or
/// is unknown/informational, 1 otherwise.
pub fn run(cfg: &RunConfig) -> Result<RunOutput, RunError> {
    let (report, dots) = execute(cfg)?;
    let mut files = Vec::new();
    if let Some(dir) = &cfg.out {
        std::fs::create_dir_all(dir)?;
        let path = dir.join(format!("{}-n{}-p{}.json", cfg.command.name(), cfg.n, cfg.p));
        std::fs::write(&path, report.to_json())?;
        files.push(path);
        for (name, text) in &dots {
            let path = dir.join(name);
            std::fs::write(&path, text)?;
            files.push(path);
        }
    }
    let exit_code = report.exit_code;
    Ok(RunOutput { report, exit_code, files })
}

fn type_counts(g: &Geometry) -> BTreeMap<usize, usize> {
    g.type_counts().into_iter().collect()
}

/// Distinct numbers of points on the objects of each type.
fn shadow_sizes(g: &Geometry) -> BTreeMap<usize, Vec<usize>> {
    let pts = g.type_mask(0);
    (1..g.rank())
        .map(|t| {
            let mut sizes: Vec<usize> = g.ids_of_type(t).iter().map(|&x| g.neighbors(x).intersection(pts).count()).collect();
            sizes.sort_unstable();
            sizes.dedup();
            (g.types()[t], sizes)
        })
        .collect()
}

/// Structural predicates shared by Gamma and Pi.
fn predicate_checks(s: &mut Section, g: &Geometry, prefix: &str, expected_diameter: Option<usize>) {
    s.check(&format!("{prefix}.multipartite"), "", g.is_multipartite(), "no incidence inside a type");
    s.check(&format!("{prefix}.symmetric"), "", g.is_symmetric(), "incidence is symmetric");
    let stats = g.flag_stats();
    s.check(
        &format!("{prefix}.transversal"),
        "",
        stats.maximal_non_chambers == 0,
        format!("{} flags, {} chambers, {} maximal non-chambers", stats.flags, stats.chambers, stats.maximal_non_chambers),
    );
    s.check(
        &format!("{prefix}.residually_connected"),
        "",
        stats.disconnected_residues == 0,
        format!("{} disconnected residues", stats.disconnected_residues),
    );
    s.check(&format!("{prefix}.string_diagram"), "", g.has_string_diagram(), "incidence propagates through middle types");
    let shadow = g.shadow_diameter();
    let detail = format!("{} points, {} lines, diameter {:?}", shadow.points, shadow.lines, shadow.diameter);
    match expected_diameter {
        Some(d) => s.check(&format!("{prefix}.shadow_diameter"), "", shadow.diameter == Some(d), format!("{detail}, expected {d}")),
        None => s.push(&format!("{prefix}.shadow_diameter"), "", Status::Info, Mode::Exhaustive, detail),
    }
    s.set("counts", type_counts(g));
    s.set("incidences", g.edge_count());
    s.set("flags", &stats);
    s.set("shadow", &shadow);
}

fn gamma_section(ctx: &mut Ctx) -> Section {
    let mut s = Section::new("gamma");
    let n = ctx.cfg.n;
    let tag = ctx.tag();
    let dot = ctx.cfg.dot;
    let g = ctx.gamma().clone();
    predicate_checks(&mut s, &g, "gamma", (n >= 3).then_some(2));
    if g.rank() >= 2 {
        s.check("gamma.residues_split", "", g.residues_split_as_products(), "residues of non-adjacent types are products");
        // One chamber with a single incidence removed must stop being transversal.
        let chamber = first_chamber(&g);
        let induced = g.induced(&chamber);
        let broken = induced.without_incidence(0, 1);
        s.check("gamma.broken_transversality_control", "", !broken.is_transversal(), "a chamber minus one incidence is rejected");
    }
    if dot {
        ctx.dots.push((format!("gamma-{tag}.dot"), to_dot(&g)));
    }
    s
}

fn first_chamber(g: &Geometry) -> Vec<usize> {
    let mut flag = Vec::new();
    let mut common = phan_core::BitSet::full(g.len());
    for t in 0..g.rank() {
        let x = common.intersection(g.type_mask(t)).first().expect("geometry has a chamber");
        common.intersect_with(g.neighbors(x));
        flag.push(x);
    }
    flag
}

fn pi_section(ctx: &mut Ctx) -> Section {
    let mut s = Section::new("pi");
    let n = ctx.cfg.n;
    let tag = ctx.tag();
    let dot = ctx.cfg.dot;
    let pi = ctx.pi().clone();
    let (p, h) = standard_pi_pair(&ctx.sp);
    s.set("p", p.encode());
    s.set("h", h.encode());
    // Any two points span a line of Pi for even n.
    let diameter = if n % 2 == 0 { 1 } else { 2 };
    predicate_checks(&mut s, &pi, "pi", (pi.rank() >= 2).then_some(diameter));
    s.set("points_per_object", shadow_sizes(&pi));
    match PiRadicalCheck::compute(&ctx.sp, &p, &h) {
        Ok(r) => s.push(
            "pi.radical_side_condition",
            "",
            Status::Info,
            Mode::Exhaustive,
            format!("Rad(H) dimension {}, outside p-perp {}, condition {}", r.radical_dim, r.radical_outside_p_perp, r.holds),
        ),
        Err(e) => s.error("pi.radical_side_condition", "", &e),
    }
    let gamma = ctx.gamma().clone();
    match check_phi(&gamma, &pi) {
        Ok(r) => {
            s.check(
                "pi.residue_isomorphism",
                "",
                r.ok(),
                format!(
                    "{} residue objects, {} Pi objects, bijective {}, preserves {}, reflects {}",
                    r.residue_objects, r.pi_objects, r.bijective, r.preserves_incidence, r.reflects_incidence
                ),
            );
            s.set("phi", &r);
        }
        Err(e) => s.error("pi.residue_isomorphism", "", &e),
    }
    match hyperplane_check(&pi) {
        Ok(r) => {
            // H meet p-perp is the one hyperplane the membership rule excludes for even n.
            let expected = if n % 2 == 0 { vec![r.h_meet_p_perp.clone()] } else { Vec::new() };
            s.check(
                "pi.hyperplanes",
                "",
                r.mismatches == expected,
                format!("{} of {} hyperplanes of H are objects; H meet p-perp = {}", r.members, r.hyperplanes, r.h_meet_p_perp),
            );
            s.set("hyperplanes", &r);
        }
        Err(e) => s.error("pi.hyperplanes", "", &e),
    }
    if dot {
        ctx.dots.push((format!("pi-{tag}.dot"), to_dot(&pi)));
    }
    s
}

fn triangle_count(g: &Geometry) -> usize {
    (0..g.len())
        .map(|u| {
            g.neighbors(u)
                .iter()
                .filter(|&v| v > u)
                .map(|v| g.neighbors(u).intersection(g.neighbors(v)).iter().filter(|&w| w > v).count())
                .sum::<usize>()
        })
        .sum()
}

/// Claimed order of the fundamental group, where one is claimed.
fn expected_pi1(geometry: &str, n: usize, p: u8) -> Option<usize> {
    match geometry {
        "gamma" if p >= 3 || n % 2 == 0 => Some(1),
        "pi" if (n, p) == (6, 2) => Some(2),
        "pi" if n >= 5 => Some(1),
        _ => None,
    }
}

fn pi1_entry(s: &mut Section, g: &Geometry, name: &str, caps: Caps, n: usize, p: u8) {
    let triangles = triangle_count(g);
    let base = g.ids_of_type(0)[0];
    let truncated = triangles > caps.max_triangles;
    let built = if truncated { pi1_point_line_presentation(g, base) } else { pi1_presentation(g, base) };
    let pr = match built {
        Ok(pr) => pr,
        Err(e) => return s.error("pi1.order", name, &e),
    };
    let order = decide_group_order(&pr.presentation, caps.max_cosets);
    // Tietze moves preserve the group, and the reduced matrix is far smaller.
    let reduced = simplify(&pr.presentation).presentation;
    let invariants = abelianized_invariants(&reduced);
    let describe = |o: &GroupOrder| match o {
        GroupOrder::Trivial => "trivial".to_string(),
        GroupOrder::Order { order } => format!("order {order}"),
        GroupOrder::Unknown { cap } => format!("unknown (coset cap {cap})"),
    };
    let detail = format!(
        "{}; {} generators, {} relators, {} presentation; abelianization {:?}",
        describe(&order),
        pr.presentation.generators,
        pr.presentation.relators.len(),
        if truncated { "point-line" } else { "triangle" },
        invariants
    );
    let status = match (order.order(), expected_pi1(name, n, p)) {
        (None, _) => Status::Unknown,
        (Some(_), None) => Status::Info,
        (Some(got), Some(want)) if got == want => Status::Pass,
        _ => Status::Fail,
    };
    s.push("pi1.order", name, status, Mode::Exhaustive, detail);
    s.data[name] = json!({
        "order": order,
        "expected_order": expected_pi1(name, n, p),
        "abelian_invariants": invariants,
        "generators": pr.presentation.generators,
        "relators": pr.presentation.relators.len(),
        "simplified_generators": reduced.generators,
        "simplified_relators": reduced.relators.len(),
        "triangles": triangles,
        "point_line_truncation": truncated,
    });
}

fn pi1_section(ctx: &mut Ctx) -> Section {
    let mut s = Section::new("pi1");
    let (n, p, caps) = (ctx.cfg.n, ctx.cfg.p, ctx.caps);
    let gamma = ctx.gamma().clone();
    pi1_entry(&mut s, &gamma, "gamma", caps, n, p);
    let pi = ctx.pi().clone();
    if pi.rank() >= 2 {
        pi1_entry(&mut s, &pi, "pi", caps, n, p);
    }
    s
}

fn flags_of(g: &Geometry, ids: &[usize]) -> Vec<Subspace> {
    let mut f: Vec<Subspace> = ids.iter().map(|&x| g.subspace(x).expect("gamma objects are subspaces").clone()).collect();
    f.sort_by_key(|u| u.dim());
    f
}

/// Independent post-check: `g` is an isometry carrying every member of `f1`
/// onto the matching member of `f2`.
fn maps_flag(sp: &SymplecticSpace, g: &phan_core::Matrix, f1: &[Subspace], f2: &[Subspace]) -> bool {
    sp.is_symplectic(g)
        && f1.iter().zip(f2).all(|(a, b)| {
            let img = sp.span(&a.basis().iter().map(|v| g.mul_vec(v)).collect::<Vec<_>>());
            img == *b
        })
}

fn flag_transitivity(s: &mut Section, ctx: &mut Ctx) {
    let seed = ctx.cfg.seed;
    let sp = ctx.sp.clone();
    let g = ctx.gamma().clone();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let all_types: Vec<usize> = (0..g.rank()).collect();
    let mut failures = 0;
    let mut transvections = 0;
    for _ in 0..FLAG_SAMPLES {
        let k = rand::Rng::gen_range(&mut rng, 1..=g.rank());
        let mut types: Vec<usize> = all_types.choose_multiple(&mut rng, k).copied().collect();
        types.sort_unstable();
        let (Ok(a), Ok(b)) = (random_flag(&g, &types, &mut rng), random_flag(&g, &types, &mut rng)) else {
            failures += 1;
            continue;
        };
        let (f1, f2) = (flags_of(&g, &a), flags_of(&g, &b));
        match map_flag_traced(&sp, &f1, &f2) {
            Ok(m) if maps_flag(&sp, &m.g, &f1, &f2) => transvections += usize::from(m.via_transvection),
            _ => failures += 1,
        }
    }
    s.push(
        "groups.flag_transitivity",
        "random pairs",
        if failures == 0 { Status::Pass } else { Status::Fail },
        Mode::Sampled,
        format!("{FLAG_SAMPLES} same-type pairs, seed {seed}, {failures} failures, {transvections} via radical transvection"),
    );
    if (ctx.cfg.n, ctx.cfg.p) == (4, 2) {
        let chambers = all_chambers(&g);
        let flags: Vec<Vec<Subspace>> = chambers.iter().map(|c| flags_of(&g, c)).collect();
        let mut bad = 0;
        for f1 in &flags {
            for f2 in &flags {
                if !map_flag_traced(&sp, f1, f2).is_ok_and(|m| maps_flag(&sp, &m.g, f1, f2)) {
                    bad += 1;
                }
            }
        }
        s.check(
            "groups.flag_transitivity",
            "all chamber pairs",
            bad == 0,
            format!("{} chambers, {} ordered pairs, {bad} failures", chambers.len(), chambers.len() * chambers.len()),
        );
    }
}

/// Every chamber of `g`, each as object ids in type order.
pub fn all_chambers(g: &Geometry) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut flag = Vec::new();
    extend_chambers(g, &mut flag, &phan_core::BitSet::full(g.len()), &mut out);
    out
}

fn extend_chambers(g: &Geometry, flag: &mut Vec<usize>, common: &phan_core::BitSet, out: &mut Vec<Vec<usize>>) {
    let t = flag.len();
    if t == g.rank() {
        out.push(flag.clone());
        return;
    }
    for x in common.intersection(g.type_mask(t)).iter() {
        flag.push(x);
        extend_chambers(g, flag, &common.intersection(g.neighbors(x)), out);
        flag.pop();
    }
}

fn groups_section(ctx: &mut Ctx) -> Section {
    let mut s = Section::new("groups");
    let (n, p, caps) = (ctx.cfg.n, ctx.cfg.p, ctx.caps);
    let order = sp_order(n, p);
    s.set("sp_order", order.to_string());
    let ambient = if order <= caps.max_group as u128 { sp_group(&ctx.sp, caps.max_group).ok() } else { None };
    match &ambient {
        Some(g) => s.check("groups.sp_order", "", g.order() as u128 == order, format!("enumerated {} elements", g.order())),
        None => s.push(
            "groups.sp_order",
            "",
            Status::Unknown,
            Mode::Exhaustive,
            format!("order {order} exceeds the group cap {}; parabolic checks skipped", caps.max_group),
        ),
    }
    match verify_structure_suite(&ctx.sp, ambient.as_ref()) {
        Ok(r) => {
            for c in &r.checks {
                s.check(&c.id, c.instance.clone(), c.holds, c.detail.clone());
            }
            s.set("scope_note", &r.scope_note);
        }
        Err(e) => s.error("groups.structure_suite", "", &e),
    }
    flag_transitivity(&mut s, ctx);
    s
}

fn amalgam_section(ctx: &mut Ctx) -> Section {
    let mut s = Section::new("amalgam");
    let (n, p, caps) = (ctx.cfg.n, ctx.cfg.p, ctx.caps);
    let a = match build_slim_amalgam(&ctx.sp) {
        Ok(a) => a,
        Err(e) => {
            s.error("amalgam.build", "", &e);
            return s;
        }
    };
    let wf = a.check();
    s.check(
        "amalgam.well_formed",
        a.name.clone(),
        wf.defect.is_none(),
        format!("{} inclusions, {} nested triples, defect {:?}", wf.inclusions, wf.nested_triples, wf.defect),
    );
    let members: BTreeMap<String, usize> = a.members.iter().map(|m| (m.label.clone(), m.group.order())).collect();
    s.set("members", &members);
    let p_us = p as usize;
    let sl2 = p_us * (p_us * p_us - 1);
    if n == 4 {
        let mut got: Vec<usize> = members.values().copied().collect();
        got.sort_unstable();
        let mut want = vec![sl2, sl2, p_us.pow(3), sl2 * sl2, p_us.pow(3) * sl2, p_us.pow(3) * sl2];
        want.sort_unstable();
        s.check("amalgam.member_orders", "", got == want, format!("{got:?}, expected {want:?}"));
    }
    let order = sp_order(n, p);
    let target = if order <= caps.max_group as u128 { sp_group(&ctx.sp, caps.max_group).ok() } else { None };
    let Some(target) = target else {
        let detail = match completion_index(&a, "S12", caps.max_cosets) {
            Ok(Some(i)) => format!("index of S12 is {i}; target order {order} exceeds the group cap, surjection unverified"),
            Ok(None) => format!("enumeration exceeded {} cosets; target order {order} exceeds the group cap", caps.max_cosets),
            Err(e) => e.to_string(),
        };
        s.push("amalgam.certificate", "", Status::Unknown, Mode::Exhaustive, format!("inconclusive: {detail}"));
        return s;
    };
    match certify_completion(&a, &target, "S12", caps.max_cosets) {
        Ok(c) => {
            let status = match c.verdict {
                Verdict::Isomorphic => Status::Pass,
                Verdict::Inconclusive => Status::Unknown,
                _ => Status::Fail,
            };
            s.push(
                "amalgam.certificate",
                "",
                status,
                Mode::Exhaustive,
                format!("verdict {:?}, index {:?}, bound {:?}, target {}", c.verdict, c.index, c.bound, c.target_order),
            );
            s.set("certificate", &c);
        }
        Err(e) => s.error("amalgam.certificate", "", &e),
    }
    let control_cap = caps.max_cosets.min(DEFAULT_MAX_COSETS);
    match certify_completion(&a.with_corrupted_inclusion(0), &target, "S12", control_cap) {
        Ok(c) => {
            s.check("amalgam.control_corrupted", "", c.verdict == Verdict::AmalgamDefect, format!("verdict {:?}", c.verdict));
            s.set("control_corrupted", &c);
        }
        Err(e) => s.error("amalgam.control_corrupted", "", &e),
    }
    match certify_completion(&a.without_inclusions(), &target, "S12", control_cap) {
        Ok(c) => {
            s.check("amalgam.control_free_product", "", c.verdict == Verdict::Inconclusive, format!("verdict {:?}", c.verdict));
            s.set("control_free_product", &c);
        }
        Err(e) => s.error("amalgam.control_free_product", "", &e),
    }
    s
}

fn cover_section(ctx: &mut Ctx) -> Section {
    let mut s = Section::new("cover");
    let caps = ctx.caps;
    let tag = ctx.tag();
    let dot = ctx.cfg.dot;
    let pi = ctx.pi().clone();
    let cover = match build_cover(&pi) {
        Ok(c) => c,
        Err(e) => {
            s.error("cover.build", "", &e);
            return s;
        }
    };
    let r = match verify_cover(&cover, caps.max_cosets) {
        Ok(r) => r,
        Err(e) => {
            s.error("cover.verify", "", &e);
            return s;
        }
    };
    s.check("cover.psi_two_to_one", "points", r.psi_two_to_one, format!("{} cover points", r.cover_points));
    s.check("cover.psi_two_to_one", "objects", r.two_to_one_on_objects, format!("{:?}", r.cover_counts));
    s.check("cover.incidence_rule", "", r.incidence_rule, "incidence is nested shadows over incident images");
    s.check("cover.residue_isomorphisms", "", r.residue_isomorphisms, format!("{} residues", r.residues_checked));
    s.check("cover.is_two_cover", "", r.is_two_cover, "");
    s.check("cover.transversal", "", r.transversal, "");
    s.check("cover.connected", "", r.connected, "");
    s.check("cover.partition_coherent", "", r.partition_coherent, "");
    s.check("cover.four_space_labelling", "", r.four_space_labelling, "");
    s.check("cover.partition_choice_invariant", "", r.partition_choice_invariant, "");
    s.check("cover.distinct_fibers_within_two", "", r.distinct_fibers_within_two, "");
    s.check("cover.radical_cross_collinear", "", r.radical_cross_collinear, "");
    s.check(
        "cover.radical_pair_distance",
        "",
        r.radical_pair_distance == Some(3),
        format!("d(Q+, Q-) = {:?}", r.radical_pair_distance),
    );
    let fiber_pairs_only = r.distance.far_pairs.iter().all(|&(a, b)| cover.psi[a] == cover.psi[b]);
    s.check(
        "cover.far_pairs_are_fibers",
        "",
        fiber_pairs_only,
        format!("{} pairs beyond distance two, all fiber pairs: {fiber_pairs_only}", r.distance.far_pairs.len()),
    );
    let pi1_status = match r.pi1 {
        GroupOrder::Trivial => Status::Pass,
        GroupOrder::Unknown { .. } => Status::Unknown,
        GroupOrder::Order { .. } => Status::Fail,
    };
    s.push("cover.simply_connected", "", pi1_status, Mode::Exhaustive, format!("{:?}", r.pi1));
    s.check(
        "cover.fiber_action",
        "",
        r.fiber.order == 2,
        format!("{} of {} generators swap the fiber", r.fiber.swapping_generators, r.fiber.generators),
    );
    s.set("base_counts", r.base_counts.iter().copied().collect::<BTreeMap<_, _>>());
    s.set("cover_counts", r.cover_counts.iter().copied().collect::<BTreeMap<_, _>>());
    s.set("distance_histogram", &r.distance.histogram);
    s.set("far_pairs", &r.distance.far_pairs);
    s.set("single_far_pair", r.only_radical_pair_far);
    s.set("fiber", &r.fiber);
    if dot {
        ctx.dots.push((format!("cover-{tag}.dot"), cover.to_dot()));
    }
    s
}
