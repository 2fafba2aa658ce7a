use clap::Parser;

fn main() {
    let cli = bottindex_cli::Cli::parse();
    let stdout = std::io::stdout();
    let code = bottindex_cli::run(cli, &mut stdout.lock());
    std::process::exit(code);
}
