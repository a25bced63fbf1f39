#include <doctest.h>

#include <fstream>
#include <numeric>
#include <random>

#include "oracle.hpp"
#include "sqh/chain_complex.hpp"
#include "sqh/complex.hpp"
#include "sqh/error.hpp"
#include "sqh/models.hpp"

using namespace sqh;

namespace {

SimplicialComplex random_complex(std::mt19937_64& rng, std::uint32_t vertices, int facets, int max_size) {
  std::vector<Simplex> fs;
  for (int i = 0; i < facets; ++i) {
    Simplex f(vertices);
    std::iota(f.begin(), f.end(), 0u);
    std::shuffle(f.begin(), f.end(), rng);
    f.resize(1 + rng() % max_size);
    fs.push_back(f);
  }
  return SimplicialComplex(vertices, fs);
}

}  // namespace

TEST_CASE("polygon and zero sphere") {
  const auto p = polygon(5);
  CHECK(p.vertex_count() == 5);
  CHECK(p.facets().size() == 5);
  CHECK(p.dimension() == 1);
  CHECK(euler_characteristic(p) == 0);
  CHECK_THROWS_AS(polygon(2), Error);

  const auto s0 = zero_sphere();
  CHECK(s0.vertex_count() == 2);
  CHECK(s0.dimension() == 0);
  CHECK(euler_characteristic(s0) == 2);
}

TEST_CASE("constructor normalizes facets") {
  const SimplicialComplex k(4, {{2, 1, 0}, {0, 1}, {3}, {0, 2, 1}});
  CHECK(k.facets() == std::vector<Simplex>{{0, 1, 2}, {3}});
  CHECK(k.contains(Simplex{0, 2}));
  CHECK_FALSE(k.contains(Simplex{0, 3}));
  CHECK_THROWS_AS(SimplicialComplex(3, {{0, 0, 1}}), Error);
  CHECK_THROWS_AS(SimplicialComplex(3, {{0, 5}}), Error);
}

TEST_CASE("joins") {
  const auto octahedron = join(join(zero_sphere(), zero_sphere()), zero_sphere());
  CHECK(octahedron == cross_polytope(3));
  CHECK(octahedron.facets().size() == 8);
  CHECK(euler_characteristic(octahedron) == 2);
  CHECK(join(SimplicialComplex(), polygon(4)) == polygon(4));
  const auto s3 = join(polygon(3), polygon(4));
  CHECK(s3.vertex_count() == 7);
  CHECK(s3.facets().size() == 12);
  CHECK(euler_characteristic(s3) == 0);
}

TEST_CASE("barycentric subdivision") {
  const auto sd = barycentric_subdivision(polygon(3));
  CHECK(sd.complex.vertex_count() == 6);
  CHECK(sd.complex.facets().size() == 6);
  CHECK(sd.source == polygon(3));
  // vertices ordered by dimension then lexicographically
  CHECK(sd.vertex_simplex[0] == Simplex{0});
  CHECK(sd.vertex_simplex[3] == Simplex{0, 1});

  const auto oct = barycentric_subdivision(cross_polytope(3));
  CHECK(oct.complex.vertex_count() == 26);
  CHECK(oct.complex.facets().size() == 48);
  CHECK(euler_characteristic(oct.complex) == 2);
}

TEST_CASE("subdivided f-vector matches explicit subdivision") {
  for (const auto& k : {cross_polytope(3), join(polygon(3), polygon(5)), polygon(7)}) {
    auto current = k;
    const auto f = SimplexTable(k).f_vector();
    for (int rounds = 1; rounds <= 2; ++rounds) {
      current = barycentric_subdivision(current).complex;
      const auto predicted = subdivided_f_vector(f, rounds);
      const auto actual = SimplexTable(current).f_vector();
      REQUIRE(predicted.size() == actual.size());
      for (std::size_t i = 0; i < actual.size(); ++i) CHECK(predicted[i] == doctest::Approx(actual[i]));
    }
  }
}

TEST_CASE("subdivision preserves the Euler characteristic") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    const auto k = random_complex(rng, 7, 5, 4);
    CHECK(euler_characteristic(barycentric_subdivision(k).complex) == euler_characteristic(k));
  }
}

TEST_CASE("boundary squares to zero on random complexes") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 30; ++trial) {
    const auto k = random_complex(rng, 8, 6, 5);
    const auto c = chain_complex(k);
    CHECK_NOTHROW(c.validate());
    const auto oracle_faces = oracle::faces_by_dim(k.facets());
    const SimplexTable t(k);
    REQUIRE(static_cast<std::size_t>(t.dimension() + 1) == oracle_faces.size());
    for (int d = 0; d <= t.dimension(); ++d) {
      CHECK(t.simplices(d) == oracle_faces[d]);
      if (d > 0) CHECK(c.boundaries[d].to_dense() == oracle::boundary(oracle_faces, d));
    }
  }
}

TEST_CASE("full subcomplex keeps the numbering") {
  const auto oct = cross_polytope(3);
  const std::vector<Vertex> equator{0, 1, 2, 3};
  const auto sq = full_subcomplex(oct, equator);
  CHECK(sq.vertex_count() == 6);
  CHECK(sq.facets().size() == 4);
  CHECK(euler_characteristic(sq) == 0);
  CHECK(full_subcomplex(oct, std::vector<Vertex>{}).empty());
  CHECK_THROWS_AS(full_subcomplex(oct, std::vector<Vertex>{9}), Error);
}

TEST_CASE("json round trip and fixture") {
  const auto k = join(polygon(4), zero_sphere());
  CHECK(complex_from_json(to_json(k)) == k);
  std::ifstream in(SQH_FIXTURE_DIR "/rp2_minimal.json");
  REQUIRE(in.good());
  const auto rp2 = complex_from_json(nlohmann::json::parse(in));
  CHECK(rp2.vertex_count() == 6);
  CHECK(euler_characteristic(rp2) == 1);
  CHECK_THROWS_AS(complex_from_json(nlohmann::json::parse(R"({"facets": 3})")), Error);
}
