use ussp::commands::Command;
use ussp::report::Report;
use ussp::{execute, parse_str, render_report, Format, Options};

const DVR: &str = include_str!("../../../docs/examples/dvr.json");
const TOWER: &str = include_str!("../../../docs/examples/z4-over-z2.json");

fn run(text: &str, cmd: Command) -> Report {
    execute(&parse_str(text).unwrap(), cmd, &Options::default()).unwrap()
}

#[test]
fn first_page_lines_are_the_gersten_terms() {
    let pages = run(DVR, Command::Pages);
    let gersten = run(DVR, Command::Gersten);
    let terms = gersten.table("terms").unwrap();
    let first: Vec<&Vec<String>> = pages.table("pages").unwrap().rows.iter().filter(|r| r[0] == "1").collect();
    let mut compared = 0;
    for row in &terms.rows {
        let (q, p) = (&row[0], &row[1]);
        if let Some(hit) = first.iter().find(|r| &r[1] == p && &r[2] == q) {
            assert_eq!(hit[3], row[3], "p={p}, q={q}");
            compared += 1;
        }
    }
    assert!(compared >= 3, "{compared}");
}

#[test]
fn page_rows_come_in_slot_order() {
    let r = run(TOWER, Command::Pages);
    let keys: Vec<(usize, usize, usize)> =
        r.table("pages").unwrap().rows.iter().map(|row| (row[0].parse().unwrap(), row[1].parse().unwrap(), row[2].parse().unwrap())).collect();
    let mut sorted = keys.clone();
    sorted.sort_unstable();
    assert_eq!(keys, sorted);
    assert!(r.all_hold());
}

#[test]
fn json_reports_round_trip() {
    for cmd in [Command::Validate, Command::Pages, Command::Collapse, Command::Colimit] {
        let r = run(TOWER, cmd);
        let back: Report = serde_json::from_slice(&render_report(&r, Format::Json)).unwrap();
        assert_eq!(back, r);
    }
}

#[test]
fn dangling_references_are_located() {
    let doc = r#"{"kind":"theory","model":{"points":[{"id":"eta","codim":0}]},
        "theory":{"em":{"sheaf":{"stalks":{"eta":[2]},"restrictions":[{"from":"s","to":"eta","matrix":[[1]]}]},"level":1}}}"#;
    let e = parse_str(doc).unwrap_err();
    assert!(e.pointer().is_some_and(|p| p.starts_with("/theory/em/sheaf/restrictions/0")), "{e}");
}

#[test]
fn window_options_trim_the_page_table() {
    let i = parse_str(TOWER).unwrap();
    let r = execute(&i, Command::Pages, &Options { window: Some((0, 1)), ..Options::default() }).unwrap();
    assert!(r.table("pages").unwrap().rows.iter().all(|row| row[1] == "0" && row[2].parse::<usize>().unwrap() <= 1));
}

#[test]
fn every_applicable_command_runs_on_the_examples() {
    for text in [DVR, TOWER, include_str!("../../../docs/examples/s3-a3.json")] {
        let i = parse_str(text).unwrap();
        for name in ussp::commands::applicable(&i.payload) {
            let cmd = Command::ALL.iter().copied().find(|c| c.name() == name).unwrap();
            execute(&i, cmd, &Options::default()).unwrap_or_else(|e| panic!("{name}: {e}"));
        }
    }
}
