from hopf_chern.exact import var
from hopf_chern.forms import BiForm, wedge
from hopf_chern.hopf import D, HopfElement, TensorElement, X, set_dimension
from hopf_chern.notation import form_latex, form_text, loc_latex, loc_text, tensor_latex, tensor_text

x = var("x1")


def test_text_and_latex_of_quotients():
    f = -2 * (1 + 2 * x).inv()
    assert loc_text(f) == "-2/(1 + 2*x1)"
    assert loc_latex(f) == r"-\frac{2}{1 + 2 x_{1}}"
    assert loc_text(x * x + 1) == "1 + x1^2"


def test_forms():
    a = wedge(BiForm.dt(1), BiForm.dx(1)) * (x + 1)
    assert form_text(a) == "(1 + x1) dt1^dx1"
    assert form_latex(BiForm.dx(2)) == "dx_{2}"
    assert form_text(BiForm.zero()) == "0"


def test_tensors():
    set_dimension(2)
    t = TensorElement.from_legs(HopfElement.gen(D(1, 1, 2)), HopfElement.gen(X(1))).scale(-1)
    assert tensor_text(t) == "-δ^1_{12} ⊗ X_1"
    assert tensor_latex(t) == r"-\delta^{1}_{12} \otimes X_{1}"
