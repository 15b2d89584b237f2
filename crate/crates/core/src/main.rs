use clap::Parser;

fn main() {
    let cli = albedo_bench::cli::Cli::parse();
    std::process::exit(albedo_bench::cli::run(cli));
}
