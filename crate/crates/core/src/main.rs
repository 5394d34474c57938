fn main() {
    let code = lagrangian_lab::cli::run(std::env::args_os(), &mut std::io::stdout().lock());
    std::process::exit(code);
}
