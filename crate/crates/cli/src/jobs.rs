//! One function per command, each returning a report with a stable layout.

use std::collections::{BTreeMap, BTreeSet};

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::{json, Map, Value};

use lattice_buildings::gfq::{complete_flag_count, Elem, GramForm};
use lattice_buildings::lattice::{
    modularity, vertex_type, HomothetyClass, LatticeRep, LaurentMatrix, TruncRing,
    DEFAULT_ENUMERATION_CAP,
};
use lattice_buildings::sl::{self, ClosePair, CloseComplex, RelationReport};
use lattice_buildings::sp::{
    apartment_chambers_at_origin, apartment_neighbor, check_lift, coords_is_primitive,
    coords_is_special, coords_type, coset_count_sp, gsp_act, lift_gallery, sp_chambers_containing,
    sp_close_complex, sp_close_vertices, sp_gallery_multiplicity, sp_galleries_by_endpoint,
    sp_omega_formula, sp_panel_thickness, sp_r_formula, ApartmentVertex, GspElement, SpClosePair,
};

use crate::envelope::admit;
use crate::output::{Graph, Report, SCHEMA_VERSION};
use crate::{Command, Common, Family, Refusal, Sampling, Size};

const CAP: usize = DEFAULT_ENUMERATION_CAP;

/// Set in tests to make every enumerated count one too large.
const FAULT_ENV: &str = "LBUILD_INJECT_FAULT";

type Outcome = Result<Report, Refusal>;

struct Ctx {
    family: Family,
    n: usize,
    q: u32,
    ring: TruncRing,
    fault: bool,
}

impl Ctx {
    fn new(family: Family, size: &Size, common: &Common, default_precision: usize) -> Result<Self, Refusal> {
        if size.n == 0 {
            return Err(Refusal::Invalid("n must be positive".into()));
        }
        let precision = common.precision.unwrap_or(default_precision);
        Ok(Self {
            family,
            n: size.n,
            q: size.q,
            ring: TruncRing::new(size.q, precision)?,
            fault: std::env::var_os(FAULT_ENV).is_some(),
        })
    }

    /// Rank of the underlying vector space.
    fn rank(&self) -> usize {
        match self.family {
            Family::Sl => self.n,
            Family::Sp => 2 * self.n,
        }
    }

    fn base(&self) -> HomothetyClass {
        LatticeRep::standard(&self.ring, self.rank()).class()
    }

    fn header(&self, command: &str) -> Map<String, Value> {
        let mut m = Map::new();
        m.insert("schema_version".into(), json!(SCHEMA_VERSION));
        m.insert("family".into(), json!(self.family.name()));
        m.insert("command".into(), json!(command));
        m.insert("n".into(), json!(self.n));
        m.insert("q".into(), json!(self.q));
        m.insert("precision".into(), json!(self.ring.precision()));
        m
    }

    fn perturb(&self, x: u128) -> u128 {
        x + u128::from(self.fault)
    }

    fn chamber_count(&self, n: usize) -> Result<u128, Refusal> {
        let t = match self.family {
            Family::Sl => LatticeRep::standard(&self.ring, n).class(),
            Family::Sp => LatticeRep::standard(&self.ring, 2 * n).class(),
        };
        let c = match self.family {
            Family::Sl => sl::chambers_containing_vertex(&self.ring, &t)?.len(),
            Family::Sp => sp_chambers_containing(&self.ring, &t)?.len(),
        };
        Ok(self.perturb(c as u128))
    }

    /// Chambers through a vertex, by the closed formula.
    fn r_formula(&self, n: usize) -> Result<u128, Refusal> {
        Ok(match self.family {
            Family::Sl => sl::r_formula(n as u32, self.q)?,
            Family::Sp => sp_r_formula(n as u32, self.q)?,
        })
    }

    fn omega_formula(&self) -> Result<u128, Refusal> {
        Ok(match self.family {
            Family::Sl => sl::omega_formula(self.n as u32, self.q)?,
            Family::Sp => sp_omega_formula(self.n as u32, self.q)?,
        })
    }

    /// Rank of the vertex whose chamber count is the gallery multiplicity.
    fn multiplicity_rank(&self) -> usize {
        match self.family {
            Family::Sl => self.n - 2,
            Family::Sp => self.n - 1,
        }
    }

    fn close_vertices(&self) -> Result<Vec<LatticeRep>, Refusal> {
        let t = self.base();
        Ok(match self.family {
            Family::Sl => sl::close_vertices(&self.ring, &t, CAP)?,
            Family::Sp => sp_close_vertices(&self.ring, &t, CAP)?.close,
        })
    }

    fn multiplicity(&self, m: &LatticeRep) -> Result<u128, Refusal> {
        let l = self.base().into_rep();
        Ok(match self.family {
            Family::Sl => sl::gallery_multiplicity(&self.ring, &ClosePair::new(&self.ring, l, m.clone())?, CAP)?,
            Family::Sp => sp_gallery_multiplicity(&self.ring, &SpClosePair::new(&self.ring, l, m.clone())?, CAP)?,
        })
    }

    fn close_complex(&self, m: &LatticeRep) -> Result<CloseComplex, Refusal> {
        let l = self.base().into_rep();
        Ok(match self.family {
            Family::Sl => sl::close_complex(&self.ring, &ClosePair::new(&self.ring, l, m.clone())?, CAP)?,
            Family::Sp => sp_close_complex(&self.ring, &SpClosePair::new(&self.ring, l, m.clone())?, CAP)?,
        })
    }

    fn galleries_by_endpoint(&self) -> Result<BTreeMap<HomothetyClass, u128>, Refusal> {
        let t = self.base();
        Ok(match self.family {
            Family::Sl => sl::galleries_by_endpoint(&self.ring, &t, CAP)?,
            Family::Sp => sp_galleries_by_endpoint(&self.ring, &t, CAP)?,
        })
    }

    fn target_name(&self) -> String {
        match self.family {
            Family::Sl => format!("A_{}", self.n as i64 - 3),
            Family::Sp => format!("C_{}", self.n as i64 - 1),
        }
    }
}

fn admitted(family: Family, size: &Size, common: &Common) -> Result<(), Refusal> {
    admit(family, size.n, size.q, common.slow, common.force).map_err(Refusal::Infeasible)
}

fn sp_only(family: Family, command: &str) -> Result<(), Refusal> {
    match family {
        Family::Sp => Ok(()),
        Family::Sl => Err(Refusal::Invalid(format!("{command} is only defined for sp"))),
    }
}

pub fn run(family: Family, command: &Command) -> Outcome {
    let default = TruncRing::DEFAULT_PRECISION;
    match command {
        Command::CountChambers { size, common } => {
            admitted(family, size, common)?;
            count_chambers(&Ctx::new(family, size, common, default)?)
        }
        Command::CountClose { size, common } => {
            admitted(family, size, common)?;
            count_close(&Ctx::new(family, size, common, default)?)
        }
        Command::Multiplicity { size, sampling, common } => {
            admitted(family, size, common)?;
            multiplicity(&Ctx::new(family, size, common, default)?, sampling)
        }
        Command::VerifyRelation { size, formula_only, common } => {
            if !formula_only {
                admitted(family, size, common)?;
            }
            verify_relation(&Ctx::new(family, size, common, default)?, !formula_only)
        }
        Command::VerifyIso { size, sampling, common } => {
            admitted(family, size, common)?;
            verify_iso(&Ctx::new(family, size, common, default)?, sampling)
        }
        Command::ExportComplex { size, pair, common } => {
            admitted(family, size, common)?;
            export_complex(&Ctx::new(family, size, common, default)?, *pair)
        }
        Command::Table { n_from, n_to, q, enumerate, common } => table(family, *n_from, *n_to, q, *enumerate, common),
        Command::Thickness { size, common } => {
            admitted(family, size, common)?;
            thickness(&Ctx::new(family, size, common, default)?)
        }
        Command::Classify { size, vertices, elements, seed, common } => {
            sp_only(family, "classify")?;
            classify(&Ctx::new(family, size, common, 16)?, *vertices, *elements, *seed)
        }
        Command::Lift { size, common } => {
            sp_only(family, "lift")?;
            lift(&Ctx::new(family, size, common, default)?)
        }
    }
}

/// Compares a formula with an enumeration and records the outcome.
fn compare(report: &mut Report, quantity: &str, formula: u128, enumerated: u128) {
    report.record.insert("formula".into(), json!(formula));
    report.record.insert("enumerated".into(), json!(enumerated));
    report.record.insert("match".into(), json!(formula == enumerated));
    if formula != enumerated {
        report.fail(json!({"quantity": quantity, "formula": formula, "enumerated": enumerated}));
    }
}

fn count_chambers(ctx: &Ctx) -> Outcome {
    let mut report = Report::new(ctx.header("count-chambers"));
    let formula = ctx.r_formula(ctx.n)?;
    let enumerated = ctx.chamber_count(ctx.n)?;
    compare(&mut report, "chambers through the base vertex", formula, enumerated);
    Ok(report)
}

fn count_close(ctx: &Ctx) -> Outcome {
    let mut report = Report::new(ctx.header("count-close"));
    let formula = ctx.omega_formula()?;
    let t = ctx.base();
    match ctx.family {
        Family::Sl => {
            let found = ctx.perturb(sl::close_vertices(&ctx.ring, &t, CAP)?.len() as u128);
            compare(&mut report, "close vertices", formula, found);
        }
        Family::Sp => {
            let found = sp_close_vertices(&ctx.ring, &t, CAP)?;
            let close = ctx.perturb(found.close.len() as u128);
            compare(&mut report, "close vertices", formula, close);
            let coset = coset_count_sp(ctx.n as u32, ctx.q)?;
            report.record.insert("coset_formula".into(), json!(coset));
            report.record.insert("non_primitive_candidates".into(), json!(found.rejected));
            report.record.insert("off_type".into(), json!(found.off_type.len()));
            if coset != close {
                report.fail(json!({"quantity": "coset count", "formula": coset, "enumerated": close}));
            }
            if let Some(m) = found.off_type.first() {
                report.fail(json!({"quantity": "special non-primitive candidate", "lattice": m.to_string()}));
            }
        }
    }
    Ok(report)
}

/// Sorted indices of `k` pairs out of `len`; all of them when `k` is 0 or too large.
fn sampled(len: usize, s: &Sampling) -> Vec<usize> {
    if s.sample == 0 || s.sample >= len {
        return (0..len).collect();
    }
    let mut rng = ChaCha8Rng::seed_from_u64(s.seed);
    let mut idx = sample(&mut rng, len, s.sample).into_vec();
    idx.sort_unstable();
    idx
}

fn multiplicity(ctx: &Ctx, sampling: &Sampling) -> Outcome {
    let mut report = Report::new(ctx.header("multiplicity"));
    let expected = ctx.r_formula(ctx.multiplicity_rank())?;
    if ctx.family == Family::Sl {
        // chambers through a vertex of Ξ_{n-2} are complete flags of k^{n-2}
        debug_assert_eq!(expected, complete_flag_count(ctx.n as u32 - 2, ctx.q)?);
    }
    let close = ctx.close_vertices()?;
    let by_endpoint = ctx.galleries_by_endpoint()?;
    let idx = sampled(close.len(), sampling);
    let mults: Vec<u128> = idx
        .par_iter()
        .map(|&i| ctx.multiplicity(&close[i]).map(|m| ctx.perturb(m)))
        .collect::<Result<_, _>>()?;
    let mut values = BTreeSet::new();
    for (&i, &m) in idx.iter().zip(&mults) {
        let reached = by_endpoint.get(&close[i].class()).copied().unwrap_or(0);
        values.insert(m);
        let ok = m == expected && reached == m;
        let mut row = Map::new();
        row.insert("index".into(), json!(i));
        row.insert("vertex".into(), json!(close[i].to_string()));
        row.insert("multiplicity".into(), json!(m));
        row.insert("galleries_to_vertex".into(), json!(reached));
        row.insert("ok".into(), json!(ok));
        if !ok {
            report.fail(Value::Object(row.clone()));
        }
        report.rows.push(row);
    }
    let total: u128 = by_endpoint.values().sum();
    let total_formula = ctx
        .r_formula(ctx.n)?
        .checked_mul(ctx.q as u128)
        .ok_or(lattice_buildings::Error::Overflow)?;
    let endpoints_close = by_endpoint.len() == close.len()
        && close.iter().all(|m| by_endpoint.contains_key(&m.class()));
    let rec = &mut report.record;
    rec.insert("formula".into(), json!(expected));
    rec.insert("values".into(), json!(values.iter().collect::<Vec<_>>()));
    rec.insert("close_vertices".into(), json!(close.len()));
    rec.insert("sampled".into(), json!(idx.len()));
    rec.insert("seed".into(), json!(sampling.seed));
    rec.insert("galleries".into(), json!(total));
    rec.insert("galleries_formula".into(), json!(total_formula));
    rec.insert("endpoints_are_close_vertices".into(), json!(endpoints_close));
    if total != total_formula {
        report.fail(json!({"quantity": "galleries leaving the base vertex", "formula": total_formula, "enumerated": total}));
    }
    if !endpoints_close {
        report.fail(json!({"quantity": "gallery endpoints", "endpoints": by_endpoint.len(), "close_vertices": close.len()}));
    }
    let all_match = report.ok;
    report.record.insert("match".into(), json!(all_match));
    Ok(report)
}

fn relation_json(r: &RelationReport) -> Value {
    json!({"r": r.r, "r_prev": r.r_prev, "omega": r.omega, "lhs": r.lhs, "rhs": r.rhs, "holds": r.holds})
}

fn verify_relation(ctx: &Ctx, enumerate: bool) -> Outcome {
    let mut report = Report::new(ctx.header("verify-relation"));
    let (n, q) = (ctx.n as u32, ctx.q);
    let prev = ctx.multiplicity_rank();
    let by_formula = RelationReport::new(n, q, ctx.r_formula(ctx.n)?, ctx.r_formula(prev)?, ctx.omega_formula()?)?;
    let enumerated = if enumerate {
        let r = ctx.chamber_count(ctx.n)?;
        // Ξ_1 is a single vertex lying in one chamber
        let r_prev = if ctx.family == Family::Sl && prev < 2 { 1 } else { ctx.chamber_count(prev)? };
        let omega = ctx.perturb(ctx.close_vertices()?.len() as u128);
        Some(RelationReport::new(n, q, r, r_prev, omega)?)
    } else {
        None
    };
    let rec = &mut report.record;
    rec.insert("formula".into(), json!(by_formula.omega));
    rec.insert("enumerated".into(), json!(enumerated.as_ref().map(|e| e.omega)));
    rec.insert("relation".into(), json!("q * r_n = r_prev * omega_n"));
    rec.insert("by_formula".into(), relation_json(&by_formula));
    rec.insert("by_enumeration".into(), enumerated.as_ref().map_or(Value::Null, relation_json));
    let holds = by_formula.holds
        && enumerated
            .as_ref()
            .is_none_or(|e| e.holds && e.r == by_formula.r && e.r_prev == by_formula.r_prev && e.omega == by_formula.omega);
    rec.insert("relation_holds".into(), json!(holds));
    if !by_formula.holds {
        report.fail(json!({"quantity": "relation on formulas", "lhs": by_formula.lhs, "rhs": by_formula.rhs}));
    }
    if let Some(e) = &enumerated {
        if !holds {
            report.fail(json!({"quantity": "relation on enumerated counts", "enumerated": relation_json(e), "formula": relation_json(&by_formula)}));
        }
    }
    Ok(report)
}

fn verify_iso(ctx: &Ctx, sampling: &Sampling) -> Outcome {
    let mut report = Report::new(ctx.header("verify-iso"));
    let close = ctx.close_vertices()?;
    let idx = sampled(close.len(), sampling);
    let complexes: Vec<CloseComplex> = idx
        .par_iter()
        .map(|&i| ctx.close_complex(&close[i]))
        .collect::<Result<_, _>>()?;
    let mut sizes = BTreeSet::new();
    for (&i, cc) in idx.iter().zip(&complexes) {
        let ok = cc.iso.ok && !ctx.fault;
        sizes.insert((cc.complex.vertices().len(), cc.complex.chamber_count()));
        let mut row = Map::new();
        row.insert("index".into(), json!(i));
        row.insert("vertex".into(), json!(close[i].to_string()));
        row.insert("vertices".into(), json!(cc.complex.vertices().len()));
        row.insert("facets".into(), json!(cc.complex.chamber_count()));
        row.insert("target_vertices".into(), json!(cc.target.vertices().len()));
        row.insert("target_facets".into(), json!(cc.target.chamber_count()));
        row.insert("iso".into(), json!(ok));
        row.insert("witness".into(), json!(cc.iso.witness));
        if !ok {
            report.fail(Value::Object(row.clone()));
        }
        report.rows.push(row);
    }
    let rec = &mut report.record;
    rec.insert("target".into(), json!(ctx.target_name()));
    rec.insert("close_vertices".into(), json!(close.len()));
    rec.insert("sampled".into(), json!(idx.len()));
    rec.insert("seed".into(), json!(sampling.seed));
    rec.insert(
        "sizes".into(),
        json!(sizes.iter().map(|(v, f)| json!({"vertices": v, "facets": f})).collect::<Vec<_>>()),
    );
    let all = report.ok;
    report.record.insert("match".into(), json!(all));
    Ok(report)
}

fn subspace_label(basis: &[Vec<Elem>]) -> String {
    let rows: Vec<String> = basis
        .iter()
        .map(|v| v.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(""))
        .collect();
    format!("<{}>", rows.join(","))
}

fn export_complex(ctx: &Ctx, pair: usize) -> Outcome {
    let close = ctx.close_vertices()?;
    let m = close.get(pair).ok_or_else(|| {
        Refusal::Invalid(format!("pair {pair} out of range: {} close vertices", close.len()))
    })?;
    let cc = ctx.close_complex(m)?;
    let mut report = Report::new(ctx.header("export-complex"));
    let labels: Vec<String> = (0..cc.complex.vertices().len())
        .map(|i| subspace_label(cc.target.vertices()[cc.map[i]].basis()))
        .collect();
    for (i, v) in cc.complex.vertices().iter().enumerate() {
        let mut row = Map::new();
        row.insert("index".into(), json!(i));
        row.insert("image".into(), json!(labels[i]));
        row.insert("class".into(), json!(v.to_string()));
        report.rows.push(row);
    }
    let rec = &mut report.record;
    rec.insert("pair".into(), json!(pair));
    rec.insert("l".into(), json!(ctx.base().rep().to_string()));
    rec.insert("m".into(), json!(m.to_string()));
    rec.insert("target".into(), json!(ctx.target_name()));
    rec.insert("vertices".into(), json!(cc.complex.vertices().len()));
    rec.insert("facets".into(), json!(cc.complex.facets()));
    rec.insert("iso".into(), json!(cc.iso.ok));
    if !cc.iso.ok {
        report.fail(json!({"quantity": "close complex isomorphism", "witness": cc.iso.witness}));
    }
    report.graph = Some(Graph {
        title: format!(
            "{} n={} q={} close complex of pair {pair}, mapped to {}",
            ctx.family.name(),
            ctx.n,
            ctx.q,
            ctx.target_name()
        ),
        vertices: cc
            .complex
            .vertices()
            .iter()
            .zip(&labels)
            .map(|(v, l)| (l.clone(), v.to_string()))
            .collect(),
        edges: cc.complex.edges(),
        facets: cc.complex.facets().to_vec(),
    });
    Ok(report)
}

const TABLE_COLUMNS: [&str; 11] = [
    "family", "n", "q", "r", "omega", "m", "q_r", "r_prev_omega", "relation_ok", "r_enumerated", "omega_enumerated",
];

fn table(family: Family, n_from: usize, n_to: usize, qs: &[u32], enumerate: bool, common: &Common) -> Outcome {
    let mut header = Map::new();
    header.insert("schema_version".into(), json!(SCHEMA_VERSION));
    header.insert("family".into(), json!(family.name()));
    header.insert("command".into(), json!("table"));
    let mut report = Report::new(header);
    report.columns = TABLE_COLUMNS.to_vec();
    let min_n = match family {
        Family::Sl => 3,
        Family::Sp => 2,
    };
    if n_from <= n_to && n_from < min_n {
        return Err(Refusal::Invalid(format!("{} needs n >= {min_n}", family.name())));
    }
    for &q in qs {
        for n in n_from..=n_to {
            let size = Size { n, q };
            let ctx = Ctx::new(family, &size, common, TruncRing::DEFAULT_PRECISION)?;
            let rel = RelationReport::new(
                n as u32,
                q,
                ctx.r_formula(n)?,
                ctx.r_formula(ctx.multiplicity_rank())?,
                ctx.omega_formula()?,
            )?;
            let (r_enum, omega_enum) = if enumerate && admit(family, n, q, common.slow, common.force).is_ok() {
                (json!(ctx.chamber_count(n)?), json!(ctx.perturb(ctx.close_vertices()?.len() as u128)))
            } else {
                (Value::Null, Value::Null)
            };
            let ok = rel.holds
                && r_enum.as_u64().is_none_or(|x| x as u128 == rel.r)
                && omega_enum.as_u64().is_none_or(|x| x as u128 == rel.omega);
            let vals = [
                json!(family.name()),
                json!(n),
                json!(q),
                json!(rel.r),
                json!(rel.omega),
                json!(rel.r_prev),
                json!(rel.lhs),
                json!(rel.rhs),
                json!(ok),
                r_enum,
                omega_enum,
            ];
            let row: Map<String, Value> = TABLE_COLUMNS.iter().map(|k| k.to_string()).zip(vals).collect();
            if !ok {
                report.fail(Value::Object(row.clone()));
            }
            report.rows.push(row);
        }
    }
    Ok(report)
}

fn thickness(ctx: &Ctx) -> Outcome {
    let mut report = Report::new(ctx.header("thickness"));
    let t = ctx.base();
    let counts: BTreeSet<usize> = match ctx.family {
        Family::Sl => sl::panel_thickness(&ctx.ring, &t, CAP)?,
        Family::Sp => sp_panel_thickness(&ctx.ring, &t, CAP)?,
    }
    .into_iter()
    .map(|c| c + usize::from(ctx.fault))
    .collect();
    let expected = ctx.q as usize + 1;
    let ok = counts.len() == 1 && counts.contains(&expected);
    let rec = &mut report.record;
    rec.insert("formula".into(), json!(expected));
    rec.insert("enumerated".into(), json!(counts));
    rec.insert("match".into(), json!(ok));
    if !ok {
        let bad = counts.iter().find(|&&c| c != expected).copied();
        report.fail(json!({"quantity": "chambers through a panel", "formula": expected, "enumerated": bad}));
    }
    Ok(report)
}

/// `[[I, S], [0, I]]` for a symmetric `S` with the given upper triangle.
fn symplectic_unipotent(n: usize, upper: &[Vec<Elem>]) -> LaurentMatrix {
    let d = 2 * n;
    let mut data = vec![Vec::new(); d * d];
    for i in 0..d {
        data[i * d + i] = vec![1];
    }
    let mut k = 0;
    for i in 0..n {
        for j in i..n {
            data[i * d + n + j] = upper[k].clone();
            data[j * d + n + i] = upper[k].clone();
            k += 1;
        }
    }
    LaurentMatrix::new(d, d, 0, data).expect("square data")
}

/// Product of upper, lower and upper unipotents over `O`, a diagonal
/// similitude and a constant similitude.
fn random_gsp(ctx: &Ctx, rng: &mut ChaCha8Rng) -> Result<GspElement, Refusal> {
    let f = ctx.ring.field();
    let n = ctx.n;
    let q = ctx.q as Elem;
    let k = n * (n + 1) / 2;
    let mut upper = || -> Vec<Vec<Elem>> { (0..k).map(|_| (0..2).map(|_| rng.gen_range(0..q)).collect()).collect() };
    let (s1, s2, s3) = (upper(), upper(), upper());
    let m = symplectic_unipotent(n, &s1)
        .mul(f, &symplectic_unipotent(n, &s2).transpose())?
        .mul(f, &symplectic_unipotent(n, &s3))?;
    let x: Vec<i64> = (0..n).map(|_| rng.gen_range(-1..=1)).collect();
    let nu = rng.gen_range(-1..=1);
    let c = rng.gen_range(1..q);
    Ok(GspElement::symplectic(f, m)?
        .compose(f, &GspElement::diagonal(&x, nu)?)?
        .compose(f, &GspElement::similitude(n, c, 0)?)?)
}

fn random_vertex(n: usize, rng: &mut ChaCha8Rng) -> ApartmentVertex {
    let mut coords = || (0..n).map(|_| rng.gen_range(-2..=2)).collect::<Vec<i64>>();
    let (a, b) = (coords(), coords());
    ApartmentVertex::new(a, b).expect("matching lengths")
}

/// Vertices `L_0 = (0; 0)` and `L_i = (0^i, 1^{n-i}; 1^n)` of the fundamental chamber.
fn fundamental_vertices(n: usize) -> Vec<ApartmentVertex> {
    (0..=n)
        .map(|i| {
            if i == 0 {
                return ApartmentVertex::new(vec![0; n], vec![0; n]).expect("matching lengths");
            }
            let mut a = vec![0; i];
            a.resize(n, 1);
            ApartmentVertex::new(a, vec![1; n]).expect("matching lengths")
        })
        .collect()
}

fn classify(ctx: &Ctx, vertices: usize, elements: usize, seed: u64) -> Outcome {
    let mut report = Report::new(ctx.header("classify"));
    let f = ctx.ring.field();
    let form = GramForm::standard(f, ctx.n);
    let modulus = 2 * ctx.n as i64;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let fundamental = fundamental_vertices(ctx.n);
    let mut sampled: Vec<ApartmentVertex> = (0..vertices).map(|_| random_vertex(ctx.n, &mut rng)).collect();
    let mut all = fundamental.clone();
    all.append(&mut sampled);
    let mut vertex_ok = 0usize;
    for v in &all {
        let l = v.realize(&ctx.ring)?;
        let mu = modularity(f, &l, &form)?;
        let lattice = (vertex_type(&l, modulus) + i64::from(ctx.fault), mu.is_some(), mu == Some(0));
        let coords = (coords_type(v), coords_is_special(v), coords_is_primitive(v));
        if lattice == coords {
            vertex_ok += 1;
        } else {
            report.fail(json!({
                "vertex": v.to_string(),
                "coordinates": {"type": coords.0, "special": coords.1, "primitive": coords.2},
                "lattice": {"type": lattice.0, "special": lattice.1, "primitive": lattice.2},
            }));
        }
    }
    let mut element_ok = 0usize;
    for _ in 0..elements {
        let g = random_gsp(ctx, &mut rng)?;
        let v = random_vertex(ctx.n, &mut rng);
        let l = v.realize(&ctx.ring)?;
        let gl = g.act_on_lattice(&ctx.ring, &l)?;
        let d = g.ord_det(f)?;
        let shifted = (vertex_type(&l, modulus) + d).rem_euclid(modulus);
        let moved = gsp_act(f, &g, &v)?.realize(&ctx.ring)?;
        if vertex_type(&gl, modulus) == shifted && moved == gl {
            element_ok += 1;
        } else {
            report.fail(json!({
                "vertex": v.to_string(),
                "ord_det": d,
                "type_before": vertex_type(&l, modulus),
                "type_after": vertex_type(&gl, modulus),
                "coordinate_action_agrees": moved == gl,
            }));
        }
    }
    let rec = &mut report.record;
    rec.insert("fundamental_vertices".into(), json!(fundamental.len()));
    rec.insert("sampled_vertices".into(), json!(vertices));
    rec.insert("vertices_agreeing".into(), json!(vertex_ok));
    rec.insert("group_elements".into(), json!(elements));
    rec.insert("elements_agreeing".into(), json!(element_ok));
    rec.insert("seed".into(), json!(seed));
    let ok = report.ok;
    report.record.insert("match".into(), json!(ok));
    Ok(report)
}

fn lift(ctx: &Ctx) -> Outcome {
    let mut report = Report::new(ctx.header("lift"));
    let n = ctx.n;
    let chambers = apartment_chambers_at_origin(n);
    // case label by the position where C and C' differ; `n + 1` stands for C = C'
    let mut per_case: BTreeMap<usize, (usize, usize)> = BTreeMap::new();
    for c in &chambers {
        for j in 0..=n + 1 {
            let c2 = if j <= n { apartment_neighbor(c, j)? } else { c.clone() };
            let (d, d2) = lift_gallery(c, &c2)?;
            let check = check_lift(&ctx.ring, c, &c2, &d, &d2)?;
            let entry = per_case.entry(j).or_default();
            entry.0 += 1;
            if check.ok() && !ctx.fault {
                entry.1 += 1;
            } else {
                report.fail(json!({
                    "c": c.lattices().iter().map(|v| v.to_string()).collect::<Vec<_>>(),
                    "c_prime": c2.lattices().iter().map(|v| v.to_string()).collect::<Vec<_>>(),
                    "check": check,
                }));
            }
        }
    }
    for (j, (pairs, ok)) in &per_case {
        let case = match *j {
            0 => "j = 0".to_string(),
            j if j == n => "j = n".to_string(),
            j if j == n + 1 => "C = C'".to_string(),
            j => format!("0 < j = {j} < n"),
        };
        let mut row = Map::new();
        row.insert("j".into(), json!(if *j <= n { Some(*j) } else { None }));
        row.insert("case".into(), json!(case));
        row.insert("pairs".into(), json!(pairs));
        row.insert("verified".into(), json!(ok));
        report.rows.push(row);
    }
    let total: usize = per_case.values().map(|x| x.0).sum();
    let verified: usize = per_case.values().map(|x| x.1).sum();
    let rec = &mut report.record;
    rec.insert("chambers".into(), json!(chambers.len()));
    rec.insert("pairs".into(), json!(total));
    rec.insert("verified".into(), json!(verified));
    rec.insert("match".into(), json!(total == verified));
    Ok(report)
}
