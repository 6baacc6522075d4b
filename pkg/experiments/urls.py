from django.urls import path
from . import views

urlpatterns = [
    path("benchmarks/", views.benchmark_list, name="benchmark_list"),
    path("experiments/", views.experiment_list, name="experiment_list"),
    path("experiments/<int:pk>/", views.experiment_detail, name="experiment_detail"),
]
