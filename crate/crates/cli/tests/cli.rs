use std::process::{Command, Output};

fn csix(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_csix")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn optimal_prints_coded_and_uncoded() {
    let o = csix(&["optimal", "--n", "7", "--k", "7"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "n=7 k=7\ncoded: 18\nuncoded: 21\nsaved: 3\n");

    let o = csix(&["optimal", "--n", "2", "--k", "2", "--format", "csv"]);
    assert_eq!(stdout(&o), "n,k,coded,uncoded,saved\n2,2,0,0,0\n");

    let o = csix(&["optimal", "--n", "5", "--k", "3", "--format", "json"]);
    assert_eq!(stdout(&o), "{\"n\":5,\"k\":3,\"coded\":7,\"uncoded\":10,\"saved\":3}\n");
}

#[test]
fn plan_and_schedule() {
    let o = csix(&["plan", "--n", "6", "--k", "3", "--format", "csv"]);
    assert_eq!(stdout(&o), "1,1,0,4,3,2\n");
    let o = csix(&["plan", "--n", "6", "--k", "3", "--format", "json-like-record"]);
    assert_eq!(stdout(&o), "{\"n\":6,\"k\":3,\"y\":[1,1,0,4,3,2],\"total\":11}\n");

    let o = csix(&["schedule", "--n", "2", "--k", "2"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "");

    let o = csix(&["schedule", "--n", "6", "--k", "3"]);
    let text = stdout(&o);
    assert_eq!(text.lines().count(), 11);
    assert!(text.contains("sender=2 j=1 packet=x[2,3]+x[1,2]\n"));
}

#[test]
fn simulate_reports_success() {
    let o = csix(&["simulate", "--n", "6", "--k", "3", "--seed", "1"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("transmissions: 11\n"));
    assert!(text.ends_with("result: SUCCESS\n"));

    let o = csix(&["simulate", "--n", "2", "--k", "2"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("transmissions: 0\n"));

    let o = csix(&["simulate", "--n", "12", "--k", "10", "--seed", "9", "--format", "json"]);
    let report = csix_cli::parse_report(&stdout(&o)).unwrap();
    assert!(report.success);
    assert_eq!(report.total_transmissions, 59);
    assert_eq!(report.seed, 9);
}

#[test]
fn simulate_is_reproducible() {
    let args = ["simulate", "--n", "9", "--k", "4", "--seed", "5", "--payload-bits", "100", "--format", "csv"];
    assert_eq!(csix(&args).stdout, csix(&args).stdout);
}

#[test]
fn table_defaults_and_custom_lists() {
    let o = csix(&["table", "--format", "csv"]);
    assert_eq!(
        stdout(&o),
        "N,NC k=2,NC k=4,NC k=7,NC k=10,NC k=15,no NC k=2,no NC 3<=k<=N\n\
         4,3,4,NA,NA,NA,5,6\n\
         7,15,16,18,NA,NA,20,21\n\
         12,55,56,58,59,NA,65,66\n\
         15,91,92,94,95,98,104,105\n"
    );
    let o = csix(&["table", "--nlist", "2", "--klist", "2", "--format", "csv"]);
    assert_eq!(stdout(&o), "N,NC k=2,no NC k=2\n2,0,0\n");
    let o = csix(&["table"]);
    assert!(stdout(&o).contains("N=15  | 91    92    94    95    98    | 104   105\n"));
}

#[test]
fn verify_small_sweeps() {
    let o = csix(&["verify", "--nmax", "2"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("all 2 instances pass"));
    let o = csix(&["verify", "--nmax", "6", "--format", "csv"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).lines().count(), 1 + 20);
}

#[test]
fn usage_errors_exit_two_without_stdout() {
    for args in [
        vec!["optimal", "--n", "3", "--k", "4"],
        vec!["optimal", "--n", "1", "--k", "1"],
        vec!["plan", "--n", "3"],
        vec!["simulate", "--n", "3", "--k", "0"],
        vec!["simulate", "--n", "3", "--k", "3", "--payload-bits", "0"],
        vec!["table", "--klist", "0,2"],
        vec!["verify", "--nmax", "21"],
        vec!["plan", "--n", "3", "--k", "3", "--format", "xml"],
    ] {
        let o = csix(&args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
        assert!(o.stdout.is_empty(), "{args:?}");
    }
}
