#pragma once

#include "dickenet/gravity.hpp"

namespace dickenet
{

struct SpectralPeak
{
	double omega = 0.0;     // rad/s
	double amplitude = 0.0; // of the fitted cosine
	/// RMS of the residual after subtracting the fitted cosine and offset.
	double residual_rms = 0.0;
};

/// Dominant angular frequency of a uniformly sampled trace: coarse location
/// from the zero-padded FFT magnitude peak, refined by a least-squares
/// cosine fit A cos(w T) + B sin(w T) + C around it.
SpectralPeak dominant_frequency(const InterferenceTrace& trace);

} // namespace dickenet
