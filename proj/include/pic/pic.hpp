#pragma once

#include "pic/field.hpp"
#include "pic/poly.hpp"
#include "pic/matrix.hpp"
#include "pic/bivar.hpp"
#include "pic/linear_form.hpp"
#include "pic/rng.hpp"
#include "pic/ideal_codes.hpp"
#include "pic/linop.hpp"
#include "pic/johnson.hpp"
#include "pic/capacity.hpp"
#include "pic/harness.hpp"
