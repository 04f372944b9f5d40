fn main() {
    std::process::exit(shortlist_bench::cli_main(std::env::args_os()));
}
