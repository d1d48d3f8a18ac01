from django.urls import path, include
from rest_framework.routers import DefaultRouter

from .views import SimulationRunViewSet, StoredDesignViewSet, latin_squares

router = DefaultRouter()
router.register(r'designs', StoredDesignViewSet)
router.register(r'simulations', SimulationRunViewSet)

urlpatterns = [
    path('v1/', include(router.urls)),
    path('latin-squares/', latin_squares, name='latin-squares'),
]
