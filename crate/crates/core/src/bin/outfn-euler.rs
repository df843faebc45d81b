fn main() {
    std::process::exit(outfn_euler::cli::run(std::env::args_os()));
}
