fn main() {
    std::process::exit(cgr_lab::app::run_subcommand(std::env::args_os()));
}
