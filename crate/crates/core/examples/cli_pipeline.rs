// The command-line tool end to end: synthesize, relabel, merge, evaluate.

use factorseg::cli::run;

pub fn run_example() -> Result<String, Box<dyn std::error::Error>> {
    let dir = tempfile::tempdir()?;
    let p = |name: &str| dir.path().join(name).to_string_lossy().into_owned();

    let steps: [Vec<String>; 3] = [
        vec!["synth".into(), "--seed".into(), "5".into(), "--width".into(), "96".into(), "--height".into(), "64".into(), "--objects".into(), "4".into(), "--out".into(), p("gt.pgm")],
        vec!["relabel".into(), "--in".into(), p("gt.pgm"), "--out-dir".into(), p("maps")],
        vec!["merge".into(), "--maps".into(), p("maps"), "--out".into(), p("pred.pgm")],
    ];
    for args in steps {
        let code = run(std::iter::once("factorseg".to_owned()).chain(args.clone()));
        println!("factorseg {} -> exit {code}", args[0]);
        if code != 0 {
            return Err(format!("{} failed with {code}", args[0]).into());
        }
    }
    let same = std::fs::read(p("gt.pgm"))? == std::fs::read(p("pred.pgm"))?;
    println!("merged file byte-equal to ground truth: {same}");

    std::fs::write(p("pairs.json"), r#"[{"gt": "gt.pgm", "pred": "pred.pgm"}]"#)?;
    let code = run(["factorseg", "eval", "--pairs", &p("pairs.json"), "--out", &p("report.json")]);
    if code != 0 {
        return Err(format!("eval failed with {code}").into());
    }
    let report = std::fs::read_to_string(p("report.json"))?;
    println!("{}", report.lines().take(8).collect::<Vec<_>>().join("\n"));
    Ok(report)
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example().map(|_| ())
}
