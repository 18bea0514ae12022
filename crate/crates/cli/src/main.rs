fn main() {
    std::process::exit(nash_atlas::app::run(std::env::args_os()));
}
