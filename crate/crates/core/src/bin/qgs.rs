fn main() {
    let steps = std::env::var("QGS_STEPS").ok();
    std::process::exit(qgs::cli::main_with(std::env::args_os(), steps.as_deref()));
}
