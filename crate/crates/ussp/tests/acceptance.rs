//! Acceptance suite: one line per criterion, nonzero exit if any fails.

use std::collections::{BTreeMap, BTreeSet};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use ussp::commands::projection_diagram;
use ussp::corpus;
use ussp_core::algebra::{product_coords, product_index, Ab, FinGroup};
use ussp_core::coniveau::{
    adelic_double_coset, cohen_macaulay_check, coniveau_system, cousin_verify, em_fringe_check, gersten_sheaf_complex,
    torsor_coset_map, AbSheaf, EmTheory, GroupSheaf, RankedPosetModel, TorsorTheory,
};
use ussp_core::pi::{colimit_sequences, pi_projection, Diagram, IndexShape, LongHtpySequence, SequenceMorphism};
use ussp_core::spectral::{
    couple_pair_pages, dd_failures, degeneracy_check, large_line_check, page, page_direct, validate_couple, ReesSystem,
};
use ussp_core::world::{Fin, Lin, World};

const CAP: usize = 1 << 16;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn within(start: Instant, limit: Duration) -> bool {
    start.elapsed() < limit
}

fn towers(seed: u64, count: usize, max_len: usize, max_order: usize) -> Vec<ReesSystem<Fin>> {
    let mut rng = corpus::rng(seed);
    (0..count).map(|_| corpus::build_tower(&corpus::random_tower(&mut rng, max_len, max_order))).collect()
}

fn finite_ab(rng: &mut ChaCha8Rng) -> Ab {
    let choices: [&[ussp_core::algebra::Int]; 4] = [&[2], &[3], &[2, 2], &[4]];
    Ab::from_cyclic_factors(choices[rng.gen_range(0..choices.len())])
}

/// Eilenberg–MacLane theories with finite stalks on small models.
fn em_systems(seed: u64, count: usize) -> Vec<ReesSystem<Lin>> {
    let mut rng = corpus::rng(seed);
    let mut out = Vec::new();
    while out.len() < count {
        let m = match rng.gen_range(0..3) {
            0 => RankedPosetModel::dvr(),
            1 => RankedPosetModel::chain(2),
            _ => corpus::random_model(&mut rng, 1, 2),
        };
        let a = finite_ab(&mut rng);
        let f = if rng.gen_bool(0.5) { AbSheaf::constant(&m, &a) } else { AbSheaf::skyscraper(&m, rng.gen_range(0..m.len()), &a) };
        let th = EmTheory::new(&f, rng.gen_range(1..=2));
        out.push(coniveau_system(&th, m.all()).expect("finite theory"));
    }
    out
}

fn couple_corpus() -> (Vec<ReesSystem<Fin>>, Vec<ReesSystem<Lin>>) {
    let mut fin = towers(101, 200, 6, 24);
    let small = towers(102, 40, 3, 4);
    for pair in small.chunks(2) {
        if let Ok(s) = ussp_core::spectral::product_system(pair) {
            fin.push(s);
        }
    }
    (fin, em_systems(103, 20))
}

fn pages_agree<W: World>(s: &ReesSystem<W>, max_page: usize) -> Result<bool, String> {
    let c = s.right_couple().map_err(|e| e.to_string())?;
    if !validate_couple(&c).valid {
        return Err("invalid couple".into());
    }
    for n in 1..=max_page {
        let a = page(&c, n).map_err(|e| e.to_string())?;
        let b = page_direct(&c, n).map_err(|e| e.to_string())?;
        if a.first_difference(&b, &c).is_some() {
            return Ok(false);
        }
    }
    Ok(true)
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let (fin, lin) = couple_corpus();
    let mut bad = Vec::new();
    let mut checked = 0;
    for (i, s) in fin.iter().enumerate() {
        if s.p_max() > 5 || s.n_max() > 5 {
            continue;
        }
        checked += 1;
        match pages_agree(s, 6) {
            Ok(true) => {}
            Ok(false) => bad.push(format!("fin#{i}")),
            Err(e) => bad.push(format!("fin#{i}: {e}")),
        }
    }
    for (i, s) in lin.iter().enumerate() {
        checked += 1;
        match pages_agree(s, 6) {
            Ok(true) => {}
            Ok(false) => bad.push(format!("lin#{i}")),
            Err(e) => bad.push(format!("lin#{i}: {e}")),
        }
    }
    let fast = within(start, Duration::from_secs(60));
    outcome(
        bad.is_empty() && checked >= 200 && fast,
        format!("{checked} couples, pages 1..6, {} mismatches {:?}, {:.1}s", bad.len(), bad.iter().take(3).collect::<Vec<_>>(), start.elapsed().as_secs_f64()),
    )
}

fn criterion_2() -> Outcome {
    let start = Instant::now();
    let systems: Vec<_> = towers(201, 100, 4, 24);
    let mut disagreements = Vec::new();
    let mut only_iii = 0;
    let mut lines = 0;
    for (i, s) in systems.iter().enumerate() {
        for q in 0..=s.bound + 2 {
            lines += 1;
            match degeneracy_check(s, q) {
                Ok(r) => {
                    let v = [r.cond_i, r.cond_i_prime, r.cond_ii, r.cond_iii];
                    if v.iter().any(|&b| b != v[0]) {
                        if v[..3].iter().all(|&b| !b) && v[3] {
                            only_iii += 1;
                        }
                        disagreements.push(format!("#{i} d={} q={q} (i,i',ii,iii)={v:?}", s.bound));
                    }
                }
                Err(e) => disagreements.push(format!("#{i} q={q}: {e}")),
            }
        }
    }
    let fast = within(start, Duration::from_secs(60));
    outcome(
        disagreements.is_empty() && fast,
        format!(
            "{} systems, {lines} lines, {} disagreements, {only_iii} of them with (iii) alone holding{}, {:.1}s",
            systems.len(),
            disagreements.len(),
            disagreements.first().map(|d| format!(" (first: {d})")).unwrap_or_default(),
            start.elapsed().as_secs_f64()
        ),
    )
}

fn criterion_3() -> Outcome {
    let (fin, lin) = couple_corpus();
    let mut violations = 0;
    let mut errors = 0;
    fn count<W: World>(s: &ReesSystem<W>, violations: &mut usize, errors: &mut usize) {
        match s.right_couple().and_then(|c| dd_failures(&c, 6)) {
            Ok(v) => *violations += v.len(),
            Err(_) => *errors += 1,
        }
    }
    for s in &fin {
        count(s, &mut violations, &mut errors);
    }
    for s in &lin {
        count(s, &mut violations, &mut errors);
    }
    outcome(violations == 0 && errors == 0, format!("{} instances, pages 1..6, {violations} violations, {errors} errors", fin.len() + lin.len()))
}

fn criterion_4() -> Outcome {
    let (fin, lin) = couple_corpus();
    let mut bad = 0;
    let mut mismatches = 0;
    fn check<W: World>(s: &ReesSystem<W>, bad: &mut usize, mismatches: &mut usize) {
        match couple_pair_pages(s, 4) {
            Ok(r) if r.agree => {}
            Ok(r) => {
                *bad += 1;
                *mismatches += r.mismatches.len();
            }
            Err(_) => *bad += 1,
        }
    }
    for s in &fin {
        check(s, &mut bad, &mut mismatches);
    }
    for s in &lin {
        check(s, &mut bad, &mut mismatches);
    }
    outcome(bad == 0, format!("{} Rees systems, pages 1..4, {bad} disagreeing ({mismatches} slots)", fin.len() + lin.len()))
}

fn criterion_5() -> Outcome {
    let mut slots = 0;
    let mut bad = Vec::new();
    for (name, m) in [("dvr", RankedPosetModel::dvr()), ("chain2", RankedPosetModel::chain(2))] {
        let mut sheaves = Vec::new();
        for a in [Ab::from_cyclic_factors(&[0]), Ab::from_cyclic_factors(&[2]), Ab::from_cyclic_factors(&[3])] {
            sheaves.push(("constant", AbSheaf::constant(&m, &a)));
            for x in 0..m.len() {
                sheaves.push(("skyscraper", AbSheaf::skyscraper(&m, x, &a)));
            }
        }
        for (kind, f) in &sheaves {
            for level in 0..=2 {
                let th = EmTheory::new(f, level);
                for q in 0..=level + 1 {
                    match em_fringe_check(&th, m.all(), q) {
                        Ok(v) => {
                            slots += v.len();
                            if let Some(s) = v.iter().find(|s| !s.matches()) {
                                bad.push(format!("{name} {kind} level {level} q {q} p {}", s.p));
                            }
                        }
                        Err(e) => bad.push(format!("{name} {kind} level {level} q {q}: {e}")),
                    }
                }
            }
        }
    }
    outcome(bad.is_empty(), format!("{slots} slots compared, {} failures{}", bad.len(), bad.first().map(|b| format!(" (first: {b})")).unwrap_or_default()))
}

fn ab_fixtures() -> Vec<AbSheaf> {
    let mut out = Vec::new();
    for m in [RankedPosetModel::point(), RankedPosetModel::dvr(), RankedPosetModel::chain(2), RankedPosetModel::dedekind(2)] {
        for a in [Ab::from_cyclic_factors(&[0]), Ab::from_cyclic_factors(&[2])] {
            out.push(AbSheaf::constant(&m, &a));
            out.push(AbSheaf::skyscraper(&m, m.len() - 1, &a));
        }
    }
    let mut rng = corpus::rng(601);
    while out.len() < 28 {
        let dim = rng.gen_range(1..=2);
        let m = corpus::random_model(&mut rng, dim, 2);
        out.push(corpus::random_ab_sheaf(&mut rng, &m));
    }
    out
}

fn criterion_6() -> Outcome {
    let fixtures = ab_fixtures();
    let mut comparisons = 0;
    let mut bad = Vec::new();
    for (i, f) in fixtures.iter().enumerate() {
        let dim = f.model().dim();
        for q in [dim, dim + 1] {
            comparisons += 1;
            match gersten_sheaf_complex(&EmTheory::new(f, q)).and_then(|c| cousin_verify(&c)) {
                Ok(v) if v.is_iso() => {}
                Ok(v) => bad.push(format!("#{i} q={q}: {v:?}")),
                Err(e) => bad.push(format!("#{i} q={q}: {e}")),
            }
        }
    }
    outcome(
        bad.is_empty() && fixtures.len() >= 20,
        format!("{} fixtures, {comparisons} isomorphisms constructed, {} failures{}", fixtures.len(), bad.len(), bad.first().map(|b| format!(" (first: {b})")).unwrap_or_default()),
    )
}

/// Orbits of `∏ G_x × G_η` on the tuples over covering pairs, one element at a time.
fn brute_force_cosets(g: &GroupSheaf) -> usize {
    let m = g.model();
    let edges = m.covers();
    let factors: Vec<FinGroup> = edges.iter().map(|&(_, y)| g.stalk(y).clone()).collect();
    let closed = m.sorted(m.with_codim(1));
    let generic = m.sorted(m.with_codim(0));
    let acting: Vec<FinGroup> = closed.iter().chain(&generic).map(|&x| g.stalk(x).clone()).collect();
    let total: usize = factors.iter().map(FinGroup::order).product();
    let n_act: usize = acting.iter().map(FinGroup::order).product();
    let mut seen = BTreeSet::new();
    let mut orbits = 0;
    for i in 0..total {
        if seen.contains(&i) {
            continue;
        }
        orbits += 1;
        let t = product_coords(&factors, i);
        for a in 0..n_act {
            let ks = product_coords(&acting, a);
            let s: Vec<usize> = edges
                .iter()
                .enumerate()
                .map(|(e, &(x, y))| {
                    let o = ks[closed.iter().position(|&c| c == x).expect("closed point")];
                    let k = ks[closed.len() + generic.iter().position(|&c| c == y).expect("generic point")];
                    let f = &factors[e];
                    f.mul(f.mul(g.res(x, y, o), t[e]), f.inv(k))
                })
                .collect();
            seen.insert(product_index(&factors, &s));
        }
    }
    orbits
}

fn s3_over_a3(points: usize) -> GroupSheaf {
    let m = RankedPosetModel::dedekind(points);
    let s3 = FinGroup::symmetric(3);
    let a3: Vec<usize> = (0..6).filter(|&a| s3.element_order(a) != 2).collect();
    let (sub, emb) = s3.subgroup(&a3);
    let mut stalks = vec![s3];
    let mut res = BTreeMap::new();
    for i in 1..=points {
        stalks.push(sub.clone());
        res.insert((i, 0), emb.clone());
    }
    GroupSheaf::new(&m, stalks, res).expect("A3 inside S3")
}

fn criterion_7() -> Outcome {
    let start = Instant::now();
    let mut fixtures = vec![("s3/a3 two points".to_string(), s3_over_a3(2))];
    let mut rng = corpus::rng(701);
    for i in 0..14 {
        let m = corpus::dedekind_like(&mut rng, 3);
        let (_, g) = corpus::random_group(&mut rng, 24);
        let s = if i % 2 == 0 { corpus::subgroup_sheaf(&mut rng, &m, &g) } else { corpus::random_group_sheaf(&mut rng, &m, 24) };
        fixtures.push((format!("random #{i}"), s));
    }
    let oracle_s3 = brute_force_cosets(&fixtures[0].1);
    let mut bad = Vec::new();
    let mut skipped = 0;
    for (name, g) in &fixtures {
        let d = match adelic_double_coset(g, CAP) {
            Ok(d) => d,
            Err(e) => {
                bad.push(format!("{name}: {e}"));
                continue;
            }
        };
        let th = TorsorTheory::new(g, CAP);
        let h1 = match th.h1() {
            Ok(h) => h,
            Err(e) if e.is_limit() => {
                skipped += 1;
                continue;
            }
            Err(e) => {
                bad.push(format!("{name}: {e}"));
                continue;
            }
        };
        let oracle = brute_force_cosets(g);
        let bij = torsor_coset_map(&th, &d).map(|m| m.is_bijection()).unwrap_or(false);
        if h1 != d.count() || oracle != d.count() || !bij {
            bad.push(format!("{name}: H^1 {h1}, cosets {}, oracle {oracle}, bijection {bij}", d.count()));
        }
    }
    let checked = fixtures.len() - skipped;
    let fast = within(start, Duration::from_secs(120));
    outcome(
        bad.is_empty() && checked >= 10 && oracle_s3 == 2 && fast,
        format!(
            "{checked} dim-1 fixtures ({skipped} over the cap), S3/A3 oracle count {oracle_s3}, {} failures{}, {:.1}s",
            bad.len(),
            bad.first().map(|b| format!(" (first: {b})")).unwrap_or_default(),
            start.elapsed().as_secs_f64()
        ),
    )
}

/// `S × S` over two copies of `S` (both first projections) into `S`.
fn diamond<W: World>(s: &LongHtpySequence<W>) -> Diagram<LongHtpySequence<W>, SequenceMorphism<W>> {
    let prod = LongHtpySequence::product(&[s.clone(), s.clone()]).expect("products of sequences");
    let pick = |a: &ussp_core::pi::PiStructure<W>| pi_projection(&[a.clone(), a.clone()], 0);
    let proj = || SequenceMorphism { fib: pick(&s.fib), total: pick(&s.total), base: pick(&s.base) };
    let id = || SequenceMorphism::identity(s);
    Diagram { objects: vec![prod, s.clone(), s.clone(), s.clone()], arrows: vec![(0, 1, proj()), (0, 2, proj()), (1, 3, id()), (2, 3, id())] }
}

fn criterion_8() -> Outcome {
    let systems = towers(801, 20, 3, 12);
    let mut fixtures = 0;
    let mut bad = Vec::new();
    for (i, s) in systems.iter().enumerate() {
        for p in 0..=s.p_max() {
            let Ok([row, _, _]) = s.rows(p) else {
                bad.push(format!("#{i} row {p}: no rows"));
                continue;
            };
            if !row.check_exactness().map(|r| r.exact).unwrap_or(false) {
                continue;
            }
            let seq = projection_diagram(&row).map_err(|e| e.to_string()).and_then(|d| colimit_sequences(&d, IndexShape::Sequence).map_err(|e| e.to_string()));
            let pos = colimit_sequences(&diamond(&row), IndexShape::Poset).map_err(|e| e.to_string());
            for (shape, col) in [("sequence", seq), ("poset", pos)] {
                fixtures += 1;
                match col {
                    Ok(c) if c.value.check_exactness().map(|r| r.exact).unwrap_or(false) => {}
                    Ok(_) => bad.push(format!("#{i} row {p} {shape}: colimit not exact")),
                    Err(e) => bad.push(format!("#{i} row {p} {shape}: {e}")),
                }
            }
        }
    }
    outcome(bad.is_empty() && fixtures >= 50, format!("{fixtures} diagrams of exact sequences, {} failures{}", bad.len(), bad.first().map(|b| format!(" (first: {b})")).unwrap_or_default()))
}

fn criterion_9() -> Outcome {
    let mut candidates: Vec<ReesSystem<Fin>> = towers(901, 150, 3, 24).into_iter().filter(|s| s.bound <= 2).collect();
    candidates.extend(towers(902, 60, 2, 24));
    let mut collapsing = 0;
    let mut bad = Vec::new();
    for (i, s) in candidates.iter().enumerate() {
        let collapses = (0..=s.bound + 2).all(|q| degeneracy_check(s, q).map(|r| r.collapse).unwrap_or(false));
        if !collapses {
            continue;
        }
        collapsing += 1;
        match large_line_check(s, 1) {
            Ok(r) => match r.strong {
                Some(v) if v.holds => {}
                Some(v) => bad.push(format!("#{i}: {} failing slots", v.failures.len())),
                None => bad.push(format!("#{i}: no strong verdict")),
            },
            Err(e) => bad.push(format!("#{i}: {e}")),
        }
    }
    outcome(
        bad.is_empty() && collapsing > 0,
        format!("{} systems with d <= 2, {collapsing} collapsing, {} failures{}", candidates.len(), bad.len(), bad.first().map(|b| format!(" (first: {b})")).unwrap_or_default()),
    )
}

fn criterion_10() -> Outcome {
    let groups = [FinGroup::cyclic(2), FinGroup::cyclic(3), FinGroup::symmetric(3), FinGroup::dihedral(4)];
    let irreducible = [RankedPosetModel::point(), RankedPosetModel::dvr(), RankedPosetModel::chain(2), RankedPosetModel::dedekind(2)];
    let mut fixtures = 0;
    let mut bad = Vec::new();
    let mut check = |name: String, g: &GroupSheaf, expect: Option<bool>| {
        fixtures += 1;
        match cohen_macaulay_check(g, CAP) {
            Ok(r) => {
                if !r.agree() {
                    bad.push(format!("{name}: conditions disagree {:?}", [r.cond_i, r.cond_ii, r.cond_iii, r.cond_iv, r.cond_v]));
                } else if expect.is_some_and(|e| e != r.cm()) {
                    bad.push(format!("{name}: CM = {}, expected {}", r.cm(), !r.cm()));
                }
            }
            Err(e) => bad.push(format!("{name}: {e}")),
        }
    };
    for m in &irreducible {
        for g in &groups {
            check(format!("constant order {} on {} points", g.order(), m.len()), &GroupSheaf::constant(m, g), Some(true));
        }
    }
    for m in [RankedPosetModel::dvr(), RankedPosetModel::chain(2), RankedPosetModel::dedekind(2)] {
        for x in m.sorted(m.with_codim(1)) {
            for g in &groups {
                check(format!("skyscraper order {} at codim-1 point {}", g.order(), m.id(x)), &GroupSheaf::skyscraper(&m, x, g), Some(false));
            }
        }
    }
    let mut rng = corpus::rng(1001);
    for i in 0..12 {
        let dim = rng.gen_range(1..=2);
        let m = corpus::random_model(&mut rng, dim, 2);
        let g = corpus::random_group_sheaf(&mut rng, &m, 12);
        check(format!("random #{i}"), &g, None);
    }
    outcome(bad.is_empty() && fixtures >= 30, format!("{fixtures} group sheaves, {} failures{}", bad.len(), bad.first().map(|b| format!(" (first: {b})")).unwrap_or_default()))
}

fn main() -> ExitCode {
    let criteria: [fn() -> Outcome; 10] =
        [criterion_1, criterion_2, criterion_3, criterion_4, criterion_5, criterion_6, criterion_7, criterion_8, criterion_9, criterion_10];
    let mut failed = 0;
    for (i, c) in criteria.iter().enumerate() {
        let o = c();
        println!("criterion {}: {} ({})", i + 1, if o.pass { "PASS" } else { "FAIL" }, o.detail);
        if !o.pass {
            failed += 1;
        }
    }
    println!("{} of 10 criteria pass", 10 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
