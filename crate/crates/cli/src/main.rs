fn main() {
    let (code, out) = lie_matrix_cli::dispatch(std::env::args_os());
    if code == 0 {
        print!("{out}");
    } else {
        eprint!("{out}");
    }
    std::process::exit(code);
}
