fn main() {
    let code = gsp4_bessel::cli::run_command(std::env::args_os(), &mut std::io::stdout().lock(), &mut std::io::stderr());
    std::process::exit(code);
}
