//! Commands: each one calls a single engine operation and tabulates its result.

use std::collections::BTreeSet;

use ussp_core::coniveau::{
    adelic_double_coset, check_theory, cohen_macaulay_check, coniveau_system, cousin_complex, cousin_verify, describe_points,
    gersten_check, gersten_complex, gersten_sheaf_complex, pi_structure, AbSheaf, CousinVerdict, EmTheory, GroupSheaf, Pair,
    PointSet, RankedPosetModel, SupportTheory, TorsorTheory,
};
use ussp_core::pi::{colimit_sequences, colimit_structures, pi_projection, Diagram, IndexShape, LongHtpySequence, PiMorphism, SequenceMorphism};
use ussp_core::spectral::{couple_pair_pages, dd_failures, degeneracy_check, page, page_direct, validate_couple, Failure, ReesSystem};
use ussp_core::world::World;

use crate::error::CliError;
use crate::instance::{Instance, Options, Payload};
use crate::report::{Report, Table};

pub const DEFAULT_CAP: usize = 1 << 16;
pub const DEFAULT_MAX_PAGE: usize = 2;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Command {
    Validate,
    Pages,
    Collapse,
    Gersten,
    Cousin,
    CmCheck,
    Torsors,
    Adelic,
    Colimit,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Validate => "validate",
            Command::Pages => "pages",
            Command::Collapse => "collapse",
            Command::Gersten => "gersten",
            Command::Cousin => "cousin",
            Command::CmCheck => "cm-check",
            Command::Torsors => "torsors",
            Command::Adelic => "adelic",
            Command::Colimit => "colimit",
        }
    }

    pub const ALL: [Command; 9] = [
        Command::Validate,
        Command::Pages,
        Command::Collapse,
        Command::Gersten,
        Command::Cousin,
        Command::CmCheck,
        Command::Torsors,
        Command::Adelic,
        Command::Colimit,
    ];
}

fn inapplicable(cmd: Command, i: &Instance) -> CliError {
    let what = match &i.payload {
        Payload::Em(_) => "an Eilenberg–MacLane theory",
        Payload::Torsor(_) => "a torsor theory",
        Payload::AbSheaf(_) => "an abelian sheaf",
        Payload::GroupSheaf(_) => "a group sheaf",
        Payload::Model(_) => "a bare model",
        Payload::Tower(_) => "a tower",
    };
    CliError::Usage(format!("{} does not apply to {} instance ({what})", cmd.name(), i.kind.name()))
}

/// Runs `cmd` on `i`; `over` overrides the instance's own options.
pub fn execute(i: &Instance, cmd: Command, over: &Options) -> Result<Report, CliError> {
    let opts = i.options.overridden_by(over);
    let mut r = Report::new(cmd.name(), i.kind.name(), &opts);
    let cap = opts.cap.unwrap_or(DEFAULT_CAP);
    match (cmd, &i.payload) {
        (Command::Validate, p) => validate(p, cap, &mut r)?,
        (Command::Pages, Payload::Tower(s)) => pages(s, &opts, &mut r)?,
        (Command::Pages, Payload::Em(th)) => pages(&coniveau_system(th, th.model().all())?, &opts, &mut r)?,
        (Command::Pages, Payload::Torsor(g)) => {
            let th = TorsorTheory::new(g, cap);
            pages(&coniveau_system(&th, g.model().all())?, &opts, &mut r)?
        }
        (Command::Collapse, Payload::Tower(s)) => collapse(s, &opts, &mut r)?,
        (Command::Collapse, Payload::Em(th)) => collapse(&coniveau_system(th, th.model().all())?, &opts, &mut r)?,
        (Command::Collapse, Payload::Torsor(g)) => {
            let th = TorsorTheory::new(g, cap);
            collapse(&coniveau_system(&th, g.model().all())?, &opts, &mut r)?
        }
        (Command::Gersten, Payload::Em(th)) => gersten(th, &opts, cap, &mut r)?,
        (Command::Gersten, Payload::Torsor(g)) => gersten(&TorsorTheory::new(g, cap), &opts, cap, &mut r)?,
        (Command::Cousin, Payload::AbSheaf(f)) => cousin(f, &opts, &mut r)?,
        (Command::Cousin, Payload::Em(th)) => cousin(th.sheaf(), &opts, &mut r)?,
        (Command::CmCheck, Payload::GroupSheaf(g) | Payload::Torsor(g)) => cm_check(g, cap, &mut r)?,
        (Command::Torsors, Payload::GroupSheaf(g) | Payload::Torsor(g)) => torsors(g, cap, &mut r)?,
        (Command::Adelic, Payload::GroupSheaf(g) | Payload::Torsor(g)) => adelic(g, cap, &mut r)?,
        (Command::Colimit, Payload::Tower(s)) => colimit_rows(s, &mut r)?,
        (Command::Colimit, Payload::Em(th)) => colimit_flags(th, cap, &mut r)?,
        (Command::Colimit, Payload::Torsor(g)) => colimit_flags(&TorsorTheory::new(g, cap), cap, &mut r)?,
        _ => return Err(inapplicable(cmd, i)),
    }
    Ok(r)
}

fn order(n: Option<u128>) -> String {
    n.map_or_else(|| "inf".to_string(), |n| n.to_string())
}

fn yes(b: bool) -> String {
    if b { "yes" } else { "no" }.to_string()
}

fn failure(f: &Failure) -> String {
    match (f.p, f.q) {
        (Some(p), Some(q)) => format!("({p}, {q}): {}", f.what),
        (Some(p), None) => format!("row {p}: {}", f.what),
        _ => f.what.clone(),
    }
}

/// Points in `(codim, id)` order.
fn reporting_order(m: &RankedPosetModel, s: PointSet) -> Vec<usize> {
    let mut v: Vec<usize> = s.iter().collect();
    v.sort_by(|&a, &b| (m.codim(a), m.id(a)).cmp(&(m.codim(b), m.id(b))));
    v
}

fn model_table(m: &RankedPosetModel) -> Table {
    let mut t = Table::new("points", &["codim", "point", "generizations"]);
    for x in reporting_order(m, m.all()) {
        let up: Vec<&str> = reporting_order(m, m.star(x).minus(PointSet::single(x))).into_iter().map(|y| m.id(y)).collect();
        t.push(vec![m.codim(x).to_string(), m.id(x).to_string(), up.join(" ")]);
    }
    t
}

fn validate(p: &Payload, cap: usize, r: &mut Report) -> Result<(), CliError> {
    match p {
        Payload::Model(m) => {
            r.verdict("model is a ranked poset", true);
            r.tables.push(model_table(m));
        }
        Payload::Tower(s) => {
            let rep = s.validate();
            r.verdict("Rees system rows and relations", rep.valid);
            r.witnesses.extend(rep.failures.iter().map(failure));
            let c = s.right_couple()?;
            let cr = validate_couple(&c);
            r.verdict("right couple axioms", cr.valid);
            r.witnesses.extend(cr.failures.iter().map(failure));
        }
        Payload::Em(th) => theory_axioms(th, cap, r)?,
        Payload::Torsor(g) => theory_axioms(&TorsorTheory::new(g, cap), cap, r)?,
        Payload::AbSheaf(f) => {
            r.verdict("sheaf restrictions compose", true);
            let m = f.model();
            let mut t = Table::new("stalks", &["codim", "point", "stalk"]);
            for x in reporting_order(m, m.all()) {
                t.push(vec![m.codim(x).to_string(), m.id(x).to_string(), f.stalk(x).to_string()]);
            }
            r.tables.push(t);
        }
        Payload::GroupSheaf(g) => {
            r.verdict("sheaf restrictions compose", true);
            let m = g.model();
            let mut t = Table::new("stalks", &["codim", "point", "order"]);
            for x in reporting_order(m, m.all()) {
                t.push(vec![m.codim(x).to_string(), m.id(x).to_string(), g.stalk(x).order().to_string()]);
            }
            r.tables.push(t);
        }
    }
    Ok(())
}

fn theory_axioms<T: SupportTheory>(th: &T, cap: usize, r: &mut Report) -> Result<(), CliError> {
    let rep = check_theory(th, cap)?;
    r.verdict("theory axioms", rep.valid());
    let mut t = Table::new("checks", &["kind", "count"]);
    t.push(vec!["long sequences".into(), rep.sequences.to_string()]);
    t.push(vec!["excisions".into(), rep.excisions.to_string()]);
    t.push(vec!["additivities".into(), rep.additivities.to_string()]);
    r.tables.push(t);
    r.witnesses.extend(rep.failures);
    Ok(())
}

fn pages<W: World>(s: &ReesSystem<W>, opts: &Options, r: &mut Report) -> Result<(), CliError> {
    let c = s.right_couple()?;
    let max_page = opts.max_page.unwrap_or(DEFAULT_MAX_PAGE).max(1);
    let (pw, qw) = opts.window.unwrap_or((c.p_max(), c.p_max() + c.n_max()));
    let mut t = Table::new("pages", &["r", "p", "q", "term", "order"]);
    for k in 1..=max_page {
        let pg = page(&c, k)?;
        let direct = page_direct(&c, k)?;
        r.verdict(format!("E_{k} by derivation equals the closed form"), pg.first_difference(&direct, &c).is_none());
        for p in 0..=c.p_max().min(pw) {
            for n in 0..=c.n_max() {
                if p + n > qw {
                    continue;
                }
                t.push(vec![k.to_string(), p.to_string(), (p + n).to_string(), pg.describe(&c, p, n), order(pg.cardinality(&c, p, n))]);
            }
        }
    }
    t.rows.sort_by_key(|row| (row[0].parse::<usize>().unwrap_or(0), row[1].parse::<usize>().unwrap_or(0), row[2].parse::<usize>().unwrap_or(0)));
    r.tables.push(t);
    let dd = dd_failures(&c, max_page)?;
    r.verdict("d_r ∘ d_r = * on every page", dd.is_empty());
    r.witnesses.extend(dd.iter().map(|(k, p, q)| format!("d_{k} ∘ d_{k} is not trivial at ({p}, {q})")));
    Ok(())
}

fn collapse<W: World>(s: &ReesSystem<W>, opts: &Options, r: &mut Report) -> Result<(), CliError> {
    let qs: Vec<usize> = match opts.q {
        Some(q) => vec![q],
        None => (0..=s.bound + 2).collect(),
    };
    let mut t = Table::new("second page", &["q", "p", "term", "order", "expected", "matches"]);
    for &q in &qs {
        let d = degeneracy_check(s, q)?;
        r.verdict(format!("q = {q}: (i) α̅ trivial"), d.cond_i);
        r.verdict(format!("q = {q}: (i') γ̅ trivial"), d.cond_i_prime);
        r.verdict(format!("q = {q}: (ii) c and bα trivial"), d.cond_ii);
        r.verdict(format!("q = {q}: (iii) line exact"), d.cond_iii);
        r.verdict(format!("q = {q}: conditions agree"), d.cond_i == d.cond_i_prime && d.cond_i == d.cond_ii && d.cond_i == d.cond_iii);
        r.verdict(format!("q = {q}: collapses at E_2"), d.collapse);
        for e in &d.e2 {
            t.push(vec![q.to_string(), e.p.to_string(), e.description.clone(), order(e.cardinality), e.expected.clone(), yes(e.matches)]);
        }
        r.witnesses.extend(d.failures.iter().map(|f| format!("q = {q}: {f}")));
    }
    r.tables.push(t);
    let pair = couple_pair_pages(s, opts.max_page.unwrap_or(DEFAULT_MAX_PAGE).max(1))?;
    r.verdict("left and right couples agree", pair.agree);
    r.witnesses.extend(pair.mismatches.iter().map(|m| {
        format!("E_{} at ({}, {}): {} differ", m.r, m.p, m.q, if m.kernel { "kernels" } else { "images" })
    }));
    Ok(())
}

fn gersten<T: SupportTheory>(th: &T, opts: &Options, cap: usize, r: &mut Report) -> Result<(), CliError> {
    let m = th.model();
    let qs: Vec<usize> = match opts.q {
        Some(q) => vec![q],
        None => (0..=m.dim() + 1).collect(),
    };
    let mut t = Table::new("terms", &["q", "p", "point", "factor"]);
    for &q in &qs {
        let rep = gersten_check(th, q, cap)?;
        r.verdict(format!("q = {q}: (i) local Gersten complexes exact"), rep.cond_i);
        r.verdict(format!("q = {q}: (ii) local systems collapse"), rep.cond_ii);
        r.verdict(format!("q = {q}: (iii) effaceable"), rep.cond_iii);
        r.verdict(format!("q = {q}: conditions agree"), rep.agree());
        if !rep.failing_points.is_empty() {
            r.witness(format!("q = {q}: not exact at {}", describe_points(m, PointSet::from_points(rep.failing_points.iter().copied()))));
        }
        for e in &rep.obstructions {
            r.witness(format!("q = {q}: class {} at {} in degree {} survives enlarging the support", e.atom, m.id(e.x), e.n));
        }
        r.witnesses.extend(rep.notes.iter().map(|n| format!("q = {q}: {n}")));
        let g = gersten_complex(th, m.all(), q)?;
        for p in 0..=q {
            for (x, f) in g.points[p].iter().zip(&g.factors[p]) {
                t.push(vec![q.to_string(), p.to_string(), m.id(*x).to_string(), T::W::describe(f)]);
            }
        }
    }
    r.tables.push(t);
    Ok(())
}

fn cousin(f: &AbSheaf, opts: &Options, r: &mut Report) -> Result<(), CliError> {
    let m = f.model();
    let cc = cousin_complex(f)?;
    r.verdict("Cousin complex conditions", cc.conditions.holds());
    r.witnesses.extend(cc.conditions.failures());
    let mut t = Table::new("terms", &["p", "point", "stalk"]);
    for (p, term) in cc.complex.terms.iter().enumerate() {
        for x in reporting_order(m, m.with_codim(p)) {
            t.push(vec![p.to_string(), m.id(x).to_string(), term.stalk(x).to_string()]);
        }
    }
    r.tables.push(t);
    let level = opts.q.unwrap_or(m.dim());
    let th = EmTheory::new(f, level);
    let candidate = gersten_sheaf_complex(&th)?;
    let verdict = cousin_verify(&candidate)?;
    r.verdict(format!("Gersten complex of K(F, {level}) is the Cousin complex"), verdict.is_iso());
    if let CousinVerdict::Failed(why) = verdict {
        r.witness(why);
    }
    Ok(())
}

fn cm_check(g: &GroupSheaf, cap: usize, r: &mut Report) -> Result<(), CliError> {
    let rep = cohen_macaulay_check(g, cap)?;
    r.verdict("(i) local Gersten complexes exact", rep.cond_i);
    r.verdict("(ii) sections are the generic families fixed on H^1_x", rep.cond_ii);
    r.verdict("(iii) restrictions mono in codim 1, iso beyond", rep.cond_iii);
    r.verdict("(iv) H^i_x trivial for i ≠ δ(x)", rep.cond_iv);
    r.verdict("(v) Gersten in every degree", rep.cond_v);
    r.verdict("conditions agree", rep.agree());
    if let Some(b) = rep.torsor_map {
        r.verdict("H^1 maps bijectively onto the double cosets", b);
    }
    let mut t = Table::new("verdict", &["homotopy Cohen-Macaulay"]);
    t.push(vec![yes(rep.cm())]);
    r.tables.push(t);
    r.witnesses.extend(rep.witnesses);
    Ok(())
}

fn torsors(g: &GroupSheaf, cap: usize, r: &mut Report) -> Result<(), CliError> {
    let m = g.model();
    let th = TorsorTheory::new(g, cap);
    let data = th.data(Pair::whole(m.all()))?;
    let mut t = Table::new("classes", &["class", "cocycle"]);
    for (k, &i) in data.reps.iter().enumerate() {
        let c = &data.cocycles[i];
        let entries: Vec<String> = th.edges().iter().zip(c).map(|(&(x, y), v)| format!("{}>{}:{v}", m.id(x), m.id(y))).collect();
        t.push(vec![k.to_string(), entries.join(" ")]);
    }
    r.tables.push(t);
    let mut s = Table::new("summary", &["cocycles", "classes", "global sections"]);
    s.push(vec![data.cocycles.len().to_string(), data.reps.len().to_string(), data.sections.len().to_string()]);
    r.tables.push(s);
    Ok(())
}

fn adelic(g: &GroupSheaf, cap: usize, r: &mut Report) -> Result<(), CliError> {
    let m = g.model();
    let d = adelic_double_coset(g, cap)?;
    let th = TorsorTheory::new(g, cap);
    let map = ussp_core::coniveau::torsor_coset_map(&th, &d)?;
    let mut t = Table::new("double cosets", &["class", "representative"]);
    for (k, &i) in d.reps.iter().enumerate() {
        let entries: Vec<String> = d.edges.iter().zip(d.tuple(i)).map(|(&(x, y), v)| format!("{}>{}:{v}", m.id(x), m.id(y))).collect();
        t.push(vec![k.to_string(), entries.join(" ")]);
    }
    r.tables.push(t);
    let mut s = Table::new("summary", &["double cosets", "torsor classes"]);
    s.push(vec![d.count().to_string(), map.torsor_classes.to_string()]);
    r.tables.push(s);
    r.verdict("torsor classes map to double cosets", map.well_defined);
    r.verdict("the map is a bijection", map.is_bijection());
    Ok(())
}

/// For each row `p` of the tower, the stabilizing sequence
/// `row × row -> row -> row` (projection, then identity).
fn colimit_rows<W: World>(s: &ReesSystem<W>, r: &mut Report) -> Result<(), CliError> {
    let mut t = Table::new("rows", &["p", "stage", "exact"]);
    for p in 0..=s.p_max() {
        let [row, _, _] = s.rows(p)?;
        let d = projection_diagram(&row)?;
        let col = colimit_sequences(&d, IndexShape::Sequence)?;
        let exact = col.value.check_exactness()?.exact;
        r.verdict(format!("row {p}: colimit is exact"), exact);
        t.push(vec![p.to_string(), col.stage.to_string(), yes(exact)]);
    }
    r.tables.push(t);
    Ok(())
}

/// `S × S -> S -> S`: projection onto the first factor, then the identity.
pub fn projection_diagram<W: World>(s: &LongHtpySequence<W>) -> Result<Diagram<LongHtpySequence<W>, SequenceMorphism<W>>, CliError> {
    let prod = LongHtpySequence::product(&[s.clone(), s.clone()])?;
    let pick = |a: &ussp_core::pi::PiStructure<W>| pi_projection(&[a.clone(), a.clone()], 0);
    let proj = SequenceMorphism { fib: pick(&s.fib), total: pick(&s.total), base: pick(&s.base) };
    Ok(Diagram { objects: vec![prod, s.clone(), s.clone()], arrows: vec![(0, 1, proj), (1, 2, SequenceMorphism::identity(s))] })
}

/// For each `p`, the colimit of `Π(X, Z)` over closed `Z` of codimension at
/// least `p`, ordered by inclusion.
fn colimit_flags<T: SupportTheory>(th: &T, cap: usize, r: &mut Report) -> Result<(), CliError> {
    let m = th.model();
    let mut t = Table::new("flags", &["p", "closed subsets", "stage", "terms"]);
    for p in 0..=m.dim() {
        let top = m.at_least(p);
        let subsets: Vec<PointSet> = m.closed_in(m.all(), cap)?.into_iter().filter(|z| z.is_subset(top)).collect();
        let objects = subsets.iter().map(|&z| pi_structure(th, Pair::new(m.all(), z))).collect::<Result<Vec<_>, _>>()?;
        let mut arrows = Vec::new();
        for (i, &a) in subsets.iter().enumerate() {
            for (j, &b) in subsets.iter().enumerate() {
                if i != j && a.is_subset(b) {
                    let maps = (0..=th.top())
                        .map(|n| th.transfer(Pair::new(m.all(), a), Pair::new(m.all(), b), n))
                        .collect::<Result<Vec<_>, _>>()?;
                    arrows.push((i, j, PiMorphism { maps }));
                }
            }
        }
        let col = colimit_structures(&Diagram { objects, arrows }, IndexShape::Poset)?;
        let direct = pi_structure(th, Pair::new(m.all(), top))?;
        let same = subsets[col.stage] == top
            && (0..=th.top()).all(|n| T::W::same_obj(&col.value.term(n), &direct.term(n)));
        r.verdict(format!("p = {p}: colimit over the flags is Π(X, X^(≥{p}))"), same);
        let terms: Vec<String> = (0..=th.top()).map(|n| T::W::describe(&col.value.term(n))).collect();
        t.push(vec![p.to_string(), subsets.len().to_string(), describe_points(m, subsets[col.stage]), terms.join(" | ")]);
    }
    r.tables.push(t);
    Ok(())
}

/// Every command that applies to the instance's kind.
pub fn applicable(payload: &Payload) -> BTreeSet<&'static str> {
    let mut out = BTreeSet::new();
    out.insert("validate");
    match payload {
        Payload::Tower(_) => out.extend(["pages", "collapse", "colimit"]),
        Payload::Em(_) => out.extend(["pages", "collapse", "gersten", "cousin", "colimit"]),
        Payload::Torsor(_) => out.extend(["pages", "collapse", "gersten", "cm-check", "torsors", "adelic", "colimit"]),
        Payload::AbSheaf(_) => out.extend(["cousin"]),
        Payload::GroupSheaf(_) => out.extend(["cm-check", "torsors", "adelic"]),
        Payload::Model(_) => {}
    }
    out
}
