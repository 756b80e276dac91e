#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace approxnum {

enum class errc {
  non_finite,
  division_by_zero_constant_term,
  exp_of_singular_series,
  degenerate_denominator,
  curve_touches_boundary,
  duplicate_points,
  not_self_map,
  numerical_breakdown,
  boundary_fixed_origin,
  empty_range,
  colliding_images,
  image_on_boundary,
  disconnected_level_set,
  horizon_exceeded,
  weight_too_large,
  zero_in_window,
  window_exceeds_horizon,
  parse_error,
  invalid_argument,
};

constexpr std::string_view errc_name(errc e) {
  switch (e) {
    case errc::non_finite: return "NonFinite";
    case errc::division_by_zero_constant_term: return "DivisionByZeroConstantTerm";
    case errc::exp_of_singular_series: return "ExpOfSingularSeries";
    case errc::degenerate_denominator: return "DegenerateDenominator";
    case errc::curve_touches_boundary: return "CurveTouchesBoundary";
    case errc::duplicate_points: return "DuplicatePoints";
    case errc::not_self_map: return "NotSelfMap";
    case errc::numerical_breakdown: return "NumericalBreakdown";
    case errc::boundary_fixed_origin: return "BoundaryFixedOrigin";
    case errc::empty_range: return "EmptyRange";
    case errc::colliding_images: return "CollidingImages";
    case errc::image_on_boundary: return "ImageOnBoundary";
    case errc::disconnected_level_set: return "DisconnectedLevelSet";
    case errc::horizon_exceeded: return "HorizonExceeded";
    case errc::weight_too_large: return "WeightTooLarge";
    case errc::zero_in_window: return "ZeroInWindow";
    case errc::window_exceeds_horizon: return "WindowExceedsHorizon";
    case errc::parse_error: return "ParseError";
    case errc::invalid_argument: return "InvalidArgument";
  }
  return "Unknown";
}

// Configuration problems (bad input) versus failures of the numerics.
constexpr bool is_config_error(errc e) {
  return e == errc::parse_error || e == errc::invalid_argument || e == errc::empty_range ||
         e == errc::window_exceeds_horizon || e == errc::weight_too_large;
}

class error : public std::runtime_error {
 public:
  error(errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code), message_(what) {}
  errc code() const noexcept { return code_; }
  // The text without the code prefix.
  const std::string& message() const noexcept { return message_; }

 private:
  errc code_;
  std::string message_;
};

}  // namespace approxnum
