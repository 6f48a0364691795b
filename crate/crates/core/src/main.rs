fn main() {
    std::process::exit(stokes_trefftz::cli::main());
}
