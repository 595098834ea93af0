use chevfiber::pairdb::{Flag, PairDb, PairDbError, EMBEDDED};
use proptest::prelude::*;

#[test]
fn database_wide_identities() {
    let db = PairDb::embedded();
    for r in db.records() {
        let d = db.dual_of(r).unwrap();
        assert_eq!(r.is_exceptional().unwrap(), d.is_exceptional().unwrap(), "{}", r.key());
        if r.is_split().unwrap() {
            assert!(!r.is_b_exceptional().unwrap(), "{}", r.key());
        }
    }
    for r in db.b_exceptional_list().unwrap() {
        assert!(r.is_exceptional().unwrap());
    }
    assert_eq!(db.corrected_exceptional_list().unwrap().len(), 35);
    assert_eq!(db.b_exceptional_list().unwrap().len(), 10);
    assert!(db.integrity().iter().all(|c| c.passed));
}

#[test]
fn split_examples() {
    let db = PairDb::embedded();
    assert!(db.find("e6(-26)", "f4").unwrap().is_split().unwrap());
    assert!(!db.find("e6(-14)", "sp(2,2)").unwrap().is_split().unwrap());
    let group = db.find("e6(6)xe6(6)", "d(e6(6))").unwrap();
    assert!(group.is_group_case() && group.is_split().unwrap());
}

#[test]
fn removed_records_are_kept_but_not_listed() {
    let db = PairDb::embedded();
    let removed: Vec<_> = db.records().iter().filter(|r| r.has(Flag::Removed)).collect();
    assert_eq!(removed.len(), 4);
    let listed = db.corrected_exceptional_list().unwrap();
    for r in removed {
        assert!(!listed.iter().any(|l| l.key() == r.key()), "{}", r.key());
    }
}

#[test]
fn empty_table_fails_the_counts() {
    let db = PairDb::parse("# nothing\n").unwrap();
    assert!(matches!(
        db.corrected_exceptional_list(),
        Err(PairDbError::Count { expected: 35, found: 0, .. })
    ));
    assert!(db.integrity().iter().any(|c| !c.passed));
}

fn record_lines() -> Vec<usize> {
    EMBEDDED
        .lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty() && !l.trim_start().starts_with('#'))
        .map(|(i, _)| i)
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn dropping_a_linked_record_breaks_integrity(k in 0usize..1000) {
        let lines = record_lines();
        let victim = lines[k % lines.len()];
        let text: Vec<&str> = EMBEDDED
            .lines()
            .enumerate()
            .filter(|(i, _)| *i != victim)
            .map(|(_, l)| l)
            .collect();
        let full = PairDb::embedded();
        let gone = full.records().iter().find(|r| r.line == victim + 1).unwrap();
        let db = PairDb::parse(&text.join("\n")).unwrap();
        let failed: Vec<&str> = db.integrity().iter().filter(|c| !c.passed).map(|c| c.name).collect();
        let self_dual = full.dual_of(gone).unwrap().key() == gone.key();
        let counted = gone.is_exceptional().unwrap() && !gone.has(Flag::Removed);
        if !self_dual {
            prop_assert!(failed.contains(&"dual links are symmetric"), "{}", gone.key());
        }
        if counted {
            prop_assert!(failed.contains(&"exceptional count is 35"), "{}", gone.key());
        }
        if self_dual && !counted {
            prop_assert!(failed.is_empty(), "{}: {:?}", gone.key(), failed);
        }
    }

    #[test]
    fn garbage_lines_are_located(at in 0usize..60) {
        let mut lines: Vec<String> = EMBEDDED.lines().map(str::to_string).collect();
        let at = at.min(lines.len());
        lines.insert(at, "not | a | record".to_string());
        match PairDb::parse(&lines.join("\n")) {
            Err(PairDbError::Malformed(errs)) => prop_assert_eq!(errs, vec![(at + 1, "expected 7 `|`-separated fields, found 3".to_string())]),
            other => prop_assert!(false, "{:?}", other.map(|_| ())),
        }
    }
}
