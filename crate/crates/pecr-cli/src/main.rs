fn main() {
    let mut out = std::io::stdout().lock();
    let code = pecr_cli::run(std::env::args_os(), &mut out);
    std::process::exit(code);
}
