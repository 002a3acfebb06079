//! Drives the command-line front end in-process from a config string.

use tsineq::cli::{parse_config, run_cli_with};

const CONFIG: &str = "\
# t² on a hybrid scale, smoothed across the gap so f^Δ stays continuous
scale = U(R[0,1];2;3)
f = poly:0,0,1@2=3
lambda = 0, 1/2
x = grid:4
theorem = IneqMR1, IneqMR2
";

fn main() {
    let cfg = parse_config(CONFIG).expect("valid config");
    println!(
        "{} scales, {} functions, theorems {:?}",
        cfg.plan.scales.len(),
        cfg.plan.functions.len(),
        cfg.plan.theorems
    );

    let path = std::env::temp_dir().join("tsineq-example.cfg");
    std::fs::write(&path, CONFIG).expect("temp dir is writable");
    for sub in ["check-identity", "eval"] {
        let argv: Vec<String> = ["tsineq", sub, "--config", path.to_str().unwrap()].map(String::from).to_vec();
        let (mut out, mut err) = (Vec::new(), Vec::new());
        let code = run_cli_with(&argv, &mut out, &mut err);
        print!("{}", String::from_utf8_lossy(&out));
        eprint!("{}", String::from_utf8_lossy(&err));
        println!("{sub} exited with {code}");
    }
}
