fn main() {
    std::process::exit(uclass_cli::run(std::env::args_os()));
}
