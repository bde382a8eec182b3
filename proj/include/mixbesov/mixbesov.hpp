#ifndef MIXBESOV_MIXBESOV_HPP
#define MIXBESOV_MIXBESOV_HPP

#include "mixbesov/errors.hpp"
#include "mixbesov/summation.hpp"
#include "mixbesov/parallel.hpp"
#include "mixbesov/grid.hpp"
#include "mixbesov/fourier.hpp"
#include "mixbesov/field_io.hpp"
#include "mixbesov/mixed_norms.hpp"
#include "mixbesov/littlewood_paley.hpp"
#include "mixbesov/difference_norms.hpp"
#include "mixbesov/random_fields.hpp"
#include "mixbesov/corpus.hpp"
#include "mixbesov/experiments.hpp"

#endif  // MIXBESOV_MIXBESOV_HPP
