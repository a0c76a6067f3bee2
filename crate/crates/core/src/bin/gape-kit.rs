fn main() {
    let res = gape_kit::cli::run_from(std::env::args_os());
    if res.exit_code == gape_kit::cli::EXIT_OK {
        println!("{}", res.summary);
        for path in &res.artifacts {
            println!("wrote {}", path.display());
        }
    } else {
        eprintln!("{}", res.summary);
    }
    std::process::exit(res.exit_code);
}
