#include "solvaq/pcm/lebedev.hpp"

#include "solvaq/error.hpp"

#include <array>
#include <cmath>
#include <span>

namespace solvaq::pcm {

namespace {

// One octahedral orbit of a Lebedev-Laikov grid: generator type, the
// parameters a and b (when used), and the weight (weights sum to 1).
struct OrbitSpec {
  int code;
  double a;
  double b;
  double weight;
};

constexpr OrbitSpec kGrid110[] = {
    {0, 0.0, 0.0, 0.3828270494937162e-2},
    {2, 0.0, 0.0, 0.9793737512487512e-2},
    {3, 0.1851156353447362e+0, 0.0, 0.8211737283191111e-2},
    {3, 0.6904210483822922e+0, 0.0, 0.9942814891178103e-2},
    {3, 0.3956894730559419e+0, 0.0, 0.9595471336070963e-2},
    {4, 0.4783690288121502e+0, 0.0, 0.9694996361663028e-2},
};
constexpr OrbitSpec kGrid194[] = {
    {0, 0.0, 0.0, 0.1782340447244611e-2},
    {1, 0.0, 0.0, 0.5716905949977102e-2},
    {2, 0.0, 0.0, 0.5573383178848738e-2},
    {3, 0.6712973442695226e+0, 0.0, 0.5608704082587997e-2},
    {3, 0.2892465627575439e+0, 0.0, 0.5158237711805383e-2},
    {3, 0.4446933178717437e+0, 0.0, 0.5518771467273614e-2},
    {3, 0.1299335447650067e+0, 0.0, 0.4106777028169394e-2},
    {4, 0.3457702197611283e+0, 0.0, 0.5051846064614808e-2},
    {5, 0.1590417105383530e+0, 0.8360360154824589e+0, 0.5530248916233094e-2},
};
constexpr OrbitSpec kGrid302[] = {
    {0, 0.0, 0.0, 0.8545911725128148e-3},
    {2, 0.0, 0.0, 0.3599119285025571e-2},
    {3, 0.3515640345570105e+0, 0.0, 0.3449788424305883e-2},
    {3, 0.6566329410219612e+0, 0.0, 0.3604822601419882e-2},
    {3, 0.4729054132581005e+0, 0.0, 0.3576729661743367e-2},
    {3, 0.9618308522614784e-1, 0.0, 0.2352101413689164e-2},
    {3, 0.2219645236294178e+0, 0.0, 0.3108953122413675e-2},
    {3, 0.7011766416089545e+0, 0.0, 0.3650045807677255e-2},
    {4, 0.2644152887060663e+0, 0.0, 0.2982344963171804e-2},
    {4, 0.5718955891878961e+0, 0.0, 0.3600820932216460e-2},
    {5, 0.2510034751770465e+0, 0.8000727494073952e+0, 0.3571540554273387e-2},
    {5, 0.1233548532583327e+0, 0.4127724083168531e+0, 0.3392312205006170e-2},
};
constexpr OrbitSpec kGrid590[] = {
    {0, 0.0, 0.0, 0.3095121295306187e-3},
    {2, 0.0, 0.0, 0.1852379698597489e-2},
    {3, 0.7040954938227469e+0, 0.0, 0.1871790639277744e-2},
    {3, 0.6807744066455243e+0, 0.0, 0.1858812585438317e-2},
    {3, 0.6372546939258752e+0, 0.0, 0.1852028828296213e-2},
    {3, 0.5044419707800358e+0, 0.0, 0.1846715956151242e-2},
    {3, 0.4215761784010967e+0, 0.0, 0.1818471778162769e-2},
    {3, 0.3317920736472123e+0, 0.0, 0.1749564657281154e-2},
    {3, 0.2384736701421887e+0, 0.0, 0.1617210647254411e-2},
    {3, 0.1459036449157763e+0, 0.0, 0.1384737234851692e-2},
    {3, 0.6095034115507196e-1, 0.0, 0.9764331165051050e-3},
    {4, 0.6116843442009876e+0, 0.0, 0.1857161196774078e-2},
    {4, 0.3964755348199858e+0, 0.0, 0.1705153996395864e-2},
    {4, 0.1724782009907724e+0, 0.0, 0.1300321685886048e-2},
    {5, 0.5610263808622060e+0, 0.3518280927733519e+0, 0.1842866472905286e-2},
    {5, 0.4742392842551980e+0, 0.2634716655937950e+0, 0.1802658934377451e-2},
    {5, 0.5984126497885380e+0, 0.1816640840360209e+0, 0.1849830560443660e-2},
    {5, 0.3791035407695563e+0, 0.1720795225656878e+0, 0.1713904507106709e-2},
    {5, 0.2778673190586244e+0, 0.8213021581932511e-1, 0.1555213603396808e-2},
    {5, 0.5033564271075117e+0, 0.8999205842074875e-1, 0.1802239128008525e-2},
};

// Appends every sign variant of (x, y, z), skipping flips of zero components.
// Order: x sign fastest, then y, then z.
void add_signs(const std::array<double, 3>& base, double w, std::vector<LebedevPoint>& out) {
  for (int sz = 0; sz < 2; ++sz)
    for (int sy = 0; sy < 2; ++sy)
      for (int sx = 0; sx < 2; ++sx) {
        if ((sx && base[0] == 0.0) || (sy && base[1] == 0.0) || (sz && base[2] == 0.0)) continue;
        out.push_back({Eigen::Vector3d(sx ? -base[0] : base[0], sy ? -base[1] : base[1],
                                       sz ? -base[2] : base[2]),
                       w});
      }
}

void add_orbit(const OrbitSpec& o, std::vector<LebedevPoint>& out) {
  const double a = o.a, b = o.b, w = o.weight;
  switch (o.code) {
    case 0:
      for (const auto& p : {std::array{1.0, 0.0, 0.0}, std::array{0.0, 1.0, 0.0},
                            std::array{0.0, 0.0, 1.0}})
        add_signs(p, w, out);
      break;
    case 1: {
      const double s = std::sqrt(0.5);
      for (const auto& p : {std::array{0.0, s, s}, std::array{s, 0.0, s}, std::array{s, s, 0.0}})
        add_signs(p, w, out);
      break;
    }
    case 2: {
      const double s = std::sqrt(1.0 / 3.0);
      add_signs({s, s, s}, w, out);
      break;
    }
    case 3: {
      const double c = std::sqrt(1.0 - 2.0 * a * a);
      for (const auto& p : {std::array{a, a, c}, std::array{a, c, a}, std::array{c, a, a}})
        add_signs(p, w, out);
      break;
    }
    case 4: {
      const double c = std::sqrt(1.0 - a * a);
      for (const auto& p : {std::array{a, c, 0.0}, std::array{c, a, 0.0}, std::array{a, 0.0, c},
                            std::array{c, 0.0, a}, std::array{0.0, a, c}, std::array{0.0, c, a}})
        add_signs(p, w, out);
      break;
    }
    case 5: {
      const double c = std::sqrt(1.0 - a * a - b * b);
      for (const auto& p : {std::array{a, b, c}, std::array{a, c, b}, std::array{b, a, c},
                            std::array{b, c, a}, std::array{c, a, b}, std::array{c, b, a}})
        add_signs(p, w, out);
      break;
    }
    default:
      break;
  }
}

std::vector<LebedevPoint> generate(std::span<const OrbitSpec> orbits) {
  std::vector<LebedevPoint> out;
  for (const auto& o : orbits) add_orbit(o, out);
  return out;
}

}  // namespace

const std::vector<LebedevPoint>& lebedev_grid(int n_points) {
  static const auto g110 = generate(kGrid110);
  static const auto g194 = generate(kGrid194);
  static const auto g302 = generate(kGrid302);
  static const auto g590 = generate(kGrid590);
  switch (n_points) {
    case 110: return g110;
    case 194: return g194;
    case 302: return g302;
    case 590: return g590;
    default:
      throw ConfigError("unsupported angular grid size " + std::to_string(n_points) +
                        " (supported: 110, 194, 302, 590)");
  }
}

bool is_supported_grid(int n_points) {
  return n_points == 110 || n_points == 194 || n_points == 302 || n_points == 590;
}

}  // namespace solvaq::pcm
