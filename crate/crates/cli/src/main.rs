use clap::Parser;

fn main() {
    let cli = intres_cli::Cli::parse();
    let (out, code) = intres_cli::run(&cli);
    println!("{out}");
    std::process::exit(code);
}
