use fracmatch::instances::{builtin, load_instance, save_instance, ArrivalStream};
use fracmatch::lp::{build_deg4_lp, build_integral_deg3_lp, build_minindex_lp, simplex_max, LinearProgram};

const BUILTINS: [&str; 9] = [
    "consistent:2",
    "consistent:7",
    "integral:start",
    "integral:first",
    "integral:second",
    "degree4",
    "family1:3",
    "family2:6",
    "random:11:30",
];

#[test]
fn builtin_instances_survive_a_file_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    for name in BUILTINS {
        let s = builtin(name).unwrap();
        s.validate().unwrap();
        let text = s.to_file_string();
        assert_eq!(ArrivalStream::parse(&text).unwrap(), s, "{name}");
        let path = dir.path().join(format!("{}.inst", name.replace(':', "_")));
        save_instance(&s, &path).unwrap();
        assert_eq!(load_instance(&path).unwrap(), s, "{name}");
    }
}

#[test]
fn unknown_builtins_are_rejected() {
    assert!(builtin("nonsense").is_err());
    assert!(builtin("consistent").is_err());
    assert!(builtin("consistent:x").is_err());
    assert!(builtin("integral:third").is_err());
}

#[test]
fn programs_survive_a_text_round_trip() {
    let programs = vec![
        build_integral_deg3_lp(),
        build_minindex_lp(),
        build_deg4_lp(&builtin("degree4").unwrap()).unwrap(),
    ];
    for lp in programs {
        let text = lp.to_text();
        let back = LinearProgram::parse(&text).unwrap();
        assert_eq!(back, lp, "{}", lp.name());
        assert_eq!(back.to_text(), text);
        assert_eq!(simplex_max(&back).value, simplex_max(&lp).value);
    }
}

#[test]
fn malformed_programs_report_a_line() {
    let text = "maximize\nobj: + 1 g\nsubject to\nc1: + 1 g <=\nbounds\ng free\nend\n";
    let err = LinearProgram::parse(text).unwrap_err().to_string();
    assert!(err.contains("line 4"), "{err}");
}
