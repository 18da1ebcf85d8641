#ifndef NMIBS_NMIBS_HPP
#define NMIBS_NMIBS_HPP

#include "nmibs/datacube.hpp"
#include "nmibs/eval.hpp"
#include "nmibs/infotheory.hpp"
#include "nmibs/pipeline.hpp"
#include "nmibs/selection.hpp"
#include "nmibs/svm.hpp"
#include "nmibs/synthetic.hpp"

#endif  // NMIBS_NMIBS_HPP
