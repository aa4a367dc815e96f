#ifndef MVRANK_HPP
#define MVRANK_HPP

#include "mvrank/errors.hpp"
#include "mvrank/vector.hpp"
#include "mvrank/random.hpp"
#include "mvrank/norms.hpp"
#include "mvrank/norm_checks.hpp"
#include "mvrank/pseudonorm.hpp"
#include "mvrank/phi.hpp"
#include "mvrank/phi_validation.hpp"
#include "mvrank/product_space.hpp"
#include "mvrank/curves.hpp"
#include "mvrank/spherical_perturbation.hpp"
#include "mvrank/counterexample.hpp"
#include "mvrank/conic.hpp"
#include "mvrank/sections.hpp"
#include "mvrank/decomposition.hpp"
#include "mvrank/distortion.hpp"

#endif
