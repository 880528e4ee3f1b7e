#pragma once

#include "pwave/chart.hpp"
#include "pwave/curvature.hpp"
#include "pwave/derivation.hpp"
#include "pwave/gauge.hpp"
#include "pwave/quotient.hpp"

#include <json.hpp>

namespace pwave {

using Json = nlohmann::json;

Json to_json(const Vec& v);
Json to_json(const Mat& m);  // row-major array of rows
Json to_json(const std::vector<std::complex<double>>& values);  // [[re, im], ...]
Json to_json(const BrinkmannPoint& p);
Json to_json(const HeisElement& h);
Json to_json(const ConfGroupElement& g);
Json to_json(const SpectralReport& r);
Json to_json(const FlatnessReport& r);
Json to_json(const ParallelReport& r);
Json to_json(const SimilarityReport& r);
Json to_json(const PropernessReport& r, bool include_grid = false);
Json to_json(const LatticeCertificate& c);
Json to_json(const GammaValidation& v);
Json to_json(const OrbitReport& r);
Json to_json(const GaugeReport& r);
Json to_json(const ContractionReport& r);

}  // namespace pwave
