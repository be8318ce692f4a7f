#include "preictal/wavelets.hpp"

#include <array>
#include <map>

#include "preictal/error.hpp"

namespace preictal {

namespace {

// Symlet scaling filters (decomposition lowpass), sym2..sym8.
const std::map<std::string, std::vector<double>, std::less<>>& symlet_table() {
  static const std::map<std::string, std::vector<double>, std::less<>> table{
      {"sym2",
       {-0.12940952255126037, 0.2241438680420134, 0.8365163037378079, 0.48296291314453416}},
      {"sym3",
       {0.03522629188570953, -0.08544127388202666, -0.13501102001025458, 0.45987750211849154,
        0.8068915093110925, 0.33267055295008263}},
      {"sym4",
       {-0.07576571478927333, -0.02963552764599851, 0.49761866763201545, 0.8037387518059161,
        0.29785779560527736, -0.09921954357684722, -0.012603967262037833, 0.0322231006040427}},
      {"sym5",
       {0.027333068345077982, 0.029519490925774643, -0.039134249302383094, 0.1993975339773936,
        0.7234076904024206, 0.6339789634582119, 0.01660210576452232, -0.17532808990845047,
        -0.021101834024758855, 0.019538882735286728}},
      {"sym6",
       {0.015404109327027373, 0.0034907120842174702, -0.11799011114819057, -0.048311742585633,
        0.4910559419267466, 0.787641141030194, 0.3379294217276218, -0.07263752278646252,
        -0.021060292512300564, 0.04472490177066578, 0.0017677118642428036,
        -0.007800708325034148}},
      {"sym7",
       {0.002681814568257878, -0.0010473848886829163, -0.01263630340325193, 0.03051551316596357,
        0.0678926935013727, -0.049552834937127255, 0.017441255086855827, 0.5361019170917628,
        0.767764317003164, 0.2886296317515146, -0.14004724044296152, -0.10780823770381774,
        0.004010244871533663, 0.010268176708511255}},
      {"sym8",
       {-0.0033824159510061256, -0.0005421323317911481, 0.03169508781149298,
        0.007607487324917605, -0.1432942383508097, -0.061273359067658524, 0.4813596512583722,
        0.7771857517005235, 0.3644418948353314, -0.05194583810770904, -0.027219029917056003,
        0.049137179673607506, 0.003808752013890615, -0.01495225833704823,
        -0.0003029205147213668, 0.0018899503327594609}},
  };
  return table;
}

OrthogonalWavelet make_wavelet(const std::string& name, const std::vector<double>& lowpass) {
  OrthogonalWavelet w{name, lowpass, std::vector<double>(lowpass.size())};
  const std::size_t n = lowpass.size();
  for (std::size_t k = 0; k < n; ++k) {
    w.highpass[k] = (k % 2 == 0 ? 1.0 : -1.0) * lowpass[n - 1 - k];
  }
  return w;
}

}  // namespace

const OrthogonalWavelet& wavelet_by_name(std::string_view name) {
  static const std::map<std::string, OrthogonalWavelet, std::less<>> banks = [] {
    std::map<std::string, OrthogonalWavelet, std::less<>> out;
    for (const auto& [key, lowpass] : symlet_table()) out.emplace(key, make_wavelet(key, lowpass));
    return out;
  }();
  const auto it = banks.find(name);
  if (it == banks.end()) {
    fail(ErrorCode::InvalidArgument,
         "swt: unsupported wavelet '" + std::string(name) + "' (expected sym2..sym8)");
  }
  return it->second;
}

std::vector<std::string> supported_wavelets() {
  std::vector<std::string> names;
  for (const auto& [key, unused] : symlet_table()) names.push_back(key);
  return names;
}

}  // namespace preictal
