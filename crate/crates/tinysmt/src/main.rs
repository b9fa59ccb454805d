use std::io::Read;

fn main() {
    let mut input = String::new();
    if let Err(e) = std::io::stdin().read_to_string(&mut input) {
        eprintln!("tinysmt: failed to read stdin: {e}");
        std::process::exit(1);
    }
    print!("{}", tinysmt::run_script(&input));
}
