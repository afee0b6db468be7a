fn main() {
    println!("chl");
}
