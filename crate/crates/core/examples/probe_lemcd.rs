// scratch: check lem-cd verdicts and timing
fn main() {
    let started = std::time::Instant::now();
    let opts = homcat::workspace::RunOptions::default();
    let (value, pass) = match homcat::workspace::run_verify("lem-cd", &serde_json::json!({"verify": "lem-cd"}), &opts) {
        Ok(v) => v,
        Err(e) => { println!("ERROR: {e}"); return; }
    };
    println!("pass = {pass:?}, elapsed = {:?}", started.elapsed());
    println!("{}", serde_json::to_string_pretty(&value).unwrap());
}
