import helpers._parallel as parallel
from helpers._general import *
