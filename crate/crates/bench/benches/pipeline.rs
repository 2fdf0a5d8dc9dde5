use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion, Throughput};
use dnamagic::{
    adjacent_correlation, build_key, decrypt, deserialize, encrypt, generate_doubly_even,
    parse_fasta, serialize, to_permutation, Direction, ParseMode, RandomStream,
};
use dnamagic_bench::{noise_image, random_key, random_sequence};

const SIDES: [usize; 3] = [16, 64, 256];

fn bench_key(c: &mut Criterion) {
    let seq = random_sequence(1);
    let fasta = format!(">bench\n{seq}\n");
    c.bench_function("parse_fasta/65540", |b| {
        b.iter(|| parse_fasta(black_box(fasta.as_bytes()), ParseMode::Strict).unwrap())
    });
    c.bench_function("build_key/65540", |b| {
        b.iter(|| build_key(black_box(seq.clone())).unwrap())
    });
}

fn bench_cipher(c: &mut Criterion) {
    let key = random_key(2);
    let mut group = c.benchmark_group("cipher");
    for side in SIDES {
        let img = noise_image(side, 3);
        group.throughput(Throughput::Elements((side * side) as u64));
        group.bench_with_input(BenchmarkId::new("encrypt", side), &img, |b, img| {
            let mut rng = RandomStream::from_seed(4);
            b.iter(|| encrypt(black_box(img), &key, &mut rng).unwrap())
        });
        let cipher = encrypt(&img, &key, &mut RandomStream::from_seed(5)).unwrap();
        group.bench_with_input(BenchmarkId::new("decrypt", side), &cipher, |b, cipher| {
            b.iter(|| decrypt(black_box(cipher), &key).unwrap())
        });
        let bytes = serialize(&cipher);
        group.bench_with_input(BenchmarkId::new("deserialize", side), &bytes, |b, bytes| {
            b.iter(|| deserialize(black_box(bytes)).unwrap())
        });
    }
    group.finish();
}

fn bench_magic(c: &mut Criterion) {
    let mut group = c.benchmark_group("magic_square");
    for side in SIDES {
        group.bench_with_input(BenchmarkId::new("permutation", side), &side, |b, &n| {
            b.iter(|| to_permutation(&generate_doubly_even(black_box(n)).unwrap()))
        });
    }
    group.finish();
}

fn bench_analysis(c: &mut Criterion) {
    let img = noise_image(256, 6);
    c.bench_function("adjacent_correlation/4096", |b| {
        let mut rng = RandomStream::from_seed(7);
        b.iter(|| {
            adjacent_correlation(img.pixels(), 256, 256, Direction::Diagonal, 4096, &mut rng)
                .unwrap()
        })
    });
}

criterion_group!(
    benches,
    bench_key,
    bench_cipher,
    bench_magic,
    bench_analysis
);
criterion_main!(benches);
