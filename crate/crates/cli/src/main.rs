fn main() {
    let out = hsikit_cli::run(std::env::args_os());
    eprint!("{}", out.stderr);
    print!("{}", out.stdout);
    std::process::exit(out.code);
}
